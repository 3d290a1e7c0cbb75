#include "cobe/basic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cobe {

int basic_k_max(double c_max, double length) {
  require(c_max > 0.0 && length >= 1.0, "k_max needs c_max > 0 and L >= 1");
  return std::max(1, static_cast<int>(std::ceil(std::log2(c_max * length))));
}

std::vector<double> cobe_alpha(int k, int k_max) {
  require(k >= 0 && k <= k_max, "cobe weights need 0 <= k <= k_max");
  std::vector<double> alpha(static_cast<std::size_t>(k_max - k + 1), 0.0);
  double rest = 0.0;
  for (int i = k + 1; i <= k_max; ++i) {
    alpha[i - k] = std::ldexp(1.0, k - i - 1);
    rest += alpha[i - k];
  }
  alpha[0] = 1.0 - rest;
  return alpha;
}

std::vector<double> gcobe_alpha(int k, int k_max, double length, double beta1, double beta2) {
  require(k >= 0 && k <= k_max, "G-COBE weights need 0 <= k <= k_max");
  if (k == k_max) return {1.0};
  std::vector<double> alpha(static_cast<std::size_t>(k_max - k + 1), 0.0);
  const double cap = 1.0 / (2.0 * (k_max - k));
  const double numer = std::sqrt(beta1 * length) / beta2 + std::ldexp(1.0, k);
  double rest = 0.0;
  for (int i = k + 1; i <= k_max; ++i) {
    alpha[i - k] = std::min(std::ldexp(numer, -i), cap);
    rest += alpha[i - k];
  }
  alpha[0] = 1.0 - rest;
  return alpha;
}

void check_alpha(std::span<const double> alpha) {
  require(!alpha.empty(), "weights must be nonempty");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    require(alpha[i] > 0.0, "weights must be positive");
    if (i > 0) require(alpha[i] <= alpha[i - 1], "weights must be nonincreasing");
  }
  const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  require(std::abs(total - 1.0) <= 1e-12, "weights must sum to 1");
}

double basic_theta(CorruptionType ctype, double alpha_i, int i, double c_max, double length, double horizon,
                   double delta) {
  const double log_td = std::log(horizon / delta);
  double theta = 1.25 * alpha_i * std::ldexp(1.0, i) + 21.0 * c_max * log_td;
  if (ctype == CorruptionType::R) theta += 8.0 * c_max * std::sqrt(alpha_i * length * log_td);
  return theta;
}

bool basic_check_fires(std::span<const double> reward, std::span<const double> bound,
                       std::span<const double> alpha, std::span<const double> theta, double t, double horizon,
                       double delta) {
  const double log_td = std::log(horizon / delta);
  // Some i < j fires iff the smallest left side over i < j is below j's right side.
  double best_left = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (j > 0) {
      const double right =
          reward[j] / alpha[j] - 8.0 * (std::sqrt(t * log_td / alpha[j]) + (log_td + theta[j]) / alpha[j]);
      if (best_left < right) return true;
    }
    best_left = std::min(best_left, (reward[j] + bound[j]) / alpha[j]);
  }
  return false;
}

Basic::Basic(const BaseFactory& factory, int k, long long length, double c_max, const AlphaRule& rule,
             BasicOptions options)
    : options_(options), horizon_(factory.horizon()), delta_(factory.delta()), length_(length), k_(k) {
  require(length >= 1, "BASIC needs L >= 1");
  require(k >= 0, "BASIC needs k >= 0");
  k_max_ = basic_k_max(c_max, static_cast<double>(length));
  first_ = std::min(k, k_max_);
  alpha_ = first_ == k_max_ ? std::vector<double>{1.0} : rule(first_, k_max_);
  require(alpha_.size() == static_cast<std::size_t>(k_max_ - first_ + 1), "weight rule returned the wrong size");
  check_alpha(alpha_);

  const RegretProfile base = factory.profile();
  check_profile_ = options_.use_known_gap && options_.gap ? base : base.gap_free();
  for (std::size_t n = 0; n < alpha_.size(); ++n) {
    const int i = first_ + static_cast<int>(n);
    theta_.push_back(basic_theta(base.ctype, alpha_[n], i, c_max, static_cast<double>(length), horizon_, delta_));
    learners_.push_back(factory.make(theta_.back()));
  }
  pulls_.assign(alpha_.size(), 0);
  rewards_.assign(alpha_.size(), 0.0);
}

Policy Basic::select(const Context& ctx, Rng& rng) {
  require(!finished(), "BASIC ran past its length");
  current_ = alpha_.size() == 1 ? 0 : rng.categorical(alpha_);
  pending_ = true;
  return learners_[current_]->select(ctx, rng);
}

bool Basic::update(const Feedback& fb) {
  require(pending_, "BASIC update without a matching select");
  pending_ = false;
  learners_[current_]->update(fb);
  ++t_;
  ++pulls_[current_];
  rewards_[current_] += fb.reward;
  total_reward_ += fb.reward;
  if (current_ == 0) ++first_counts_[fb.policy];
  ++all_counts_[fb.policy];

  const long long pulled = std::accumulate(pulls_.begin(), pulls_.end(), 0LL);
  require(pulled == t_, "BASIC bookkeeping: pull counts do not sum to t");
  const double summed = std::accumulate(rewards_.begin(), rewards_.end(), 0.0);
  require(std::abs(summed - total_reward_) <= 1e-9 * std::max(1.0, total_reward_),
          "BASIC bookkeeping: per-learner rewards do not sum to the total");

  if (alpha_.size() < 2) return true;
  std::vector<double> bound(alpha_.size());
  for (std::size_t n = 0; n < alpha_.size(); ++n)
    bound[n] = eval_regret_bound(check_profile_, static_cast<double>(pulls_[n]), theta_[n], options_.gap);
  return !basic_check_fires(rewards_, bound, alpha_, theta_, static_cast<double>(t_), horizon_, delta_);
}

std::optional<Policy> Basic::most_played() const {
  const auto& counts = first_counts_.empty() ? all_counts_ : first_counts_;
  std::optional<Policy> best;
  long long most = -1;
  for (const auto& [pi, n] : counts)
    if (n > most) {
      most = n;
      best = pi;
    }
  return best;
}

}  // namespace cobe
