#include "cobe/adversary.hpp"

#include <algorithm>
#include <cmath>

namespace cobe {

double Budget::fraction(double full) {
  if (remaining_ <= 0.0 || full <= 0.0) return 0.0;
  const double lambda = std::min(1.0, remaining_ / full);
  remaining_ = lambda < 1.0 ? 0.0 : remaining_ - full;
  return lambda;
}

namespace {

std::vector<double> blend(std::span<const double> clean, const std::vector<double>& target, double lambda) {
  std::vector<double> out(clean.begin(), clean.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = clean[i] + lambda * (target[i] - clean[i]);
  return out;
}

int argmax(std::span<const double> v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

int argmin(std::span<const double> v) {
  return static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::vector<double> FlipAdversary::corrupt(int, const PublicHistory&, std::span<const double> clean) {
  if (clean.size() < 2) return {clean.begin(), clean.end()};
  const int best = argmax(clean);
  int decoy = decoy_ >= 0 && decoy_ < static_cast<int>(clean.size()) ? decoy_ : argmin(clean);
  if (decoy == best) return {clean.begin(), clean.end()};
  std::vector<double> target(clean.begin(), clean.end());
  std::swap(target[best], target[decoy]);
  const double full = std::abs(clean[best] - clean[decoy]);
  return blend(clean, target, budget_.fraction(full));
}

std::vector<double> BoostAdversary::corrupt(int, const PublicHistory&, std::span<const double> clean) {
  require(target_ >= 0 && target_ < static_cast<int>(clean.size()), "boost target out of range");
  std::vector<double> target(clean.begin(), clean.end());
  target[target_] = 1.0;
  return blend(clean, target, budget_.fraction(1.0 - clean[target_]));
}

std::vector<double> MirrorAdversary::corrupt(int, const PublicHistory&, std::span<const double> clean) {
  std::vector<double> target(clean.size());
  double full = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    target[i] = 1.0 - clean[i];
    full = std::max(full, std::abs(1.0 - 2.0 * clean[i]));
  }
  return blend(clean, target, budget_.fraction(full));
}

Kernel TransitionSwapAdversary::corrupt(int, const PublicHistory&, const TabularMdp& m) {
  require(a0_ >= 0 && a1_ >= 0 && a0_ < m.A && a1_ < m.A, "swap actions out of range");
  Kernel swapped = m.kernel;
  for (int s = 0; s < m.S; ++s) {
    const std::size_t i0 = static_cast<std::size_t>(s) * m.A + a0_;
    const std::size_t i1 = static_cast<std::size_t>(s) * m.A + a1_;
    std::swap(swapped.sigma[i0], swapped.sigma[i1]);
    for (int y = 0; y < m.S; ++y) std::swap(swapped.p[i0 * m.S + y], swapped.p[i1 * m.S + y]);
  }
  const double full = corruption_magnitude_mdp(m, m.kernel, swapped);
  const double lambda = budget_.fraction(full);
  Kernel out = m.kernel;
  for (std::size_t i = 0; i < out.sigma.size(); ++i)
    out.sigma[i] += lambda * (swapped.sigma[i] - out.sigma[i]);
  for (std::size_t i = 0; i < out.p.size(); ++i) out.p[i] += lambda * (swapped.p[i] - out.p[i]);
  return out;
}

std::unique_ptr<BanditAdversary> make_bandit_adversary(const std::string& name, double budget, int target) {
  require(budget >= 0.0, "corruption budget must be nonnegative");
  if (name == "none") return std::make_unique<NoBanditCorruption>();
  if (name == "flip") return std::make_unique<FlipAdversary>(budget, target);
  if (name == "boost") return std::make_unique<BoostAdversary>(budget, target < 0 ? 1 : target);
  if (name == "lower_bound" || name == "mirror") return std::make_unique<MirrorAdversary>(budget);
  throw ConfigError("unknown bandit adversary '" + name + "'");
}

std::unique_ptr<MdpAdversary> make_mdp_adversary(const std::string& name, double budget) {
  require(budget >= 0.0, "corruption budget must be nonnegative");
  if (name == "none") return std::make_unique<NoMdpCorruption>();
  if (name == "transition_swap") return std::make_unique<TransitionSwapAdversary>(budget);
  throw ConfigError("unknown MDP adversary '" + name + "'");
}

}  // namespace cobe
