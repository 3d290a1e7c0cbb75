#include "cobe/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cobe/errors.hpp"

namespace cobe {

namespace {

constexpr double kTargetSlack = 1.01;
constexpr int kMaxIterations = 20000;

struct Projected {
  std::vector<Vec> x;  // coordinates in an orthonormal basis of the span
  int rank = 0;
};

Projected project(std::span<const Vec> actions) {
  const int d = static_cast<int>(actions.front().size());
  const Mat basis = span_basis(actions, d);
  Projected p;
  p.rank = static_cast<int>(basis.cols());
  p.x.reserve(actions.size());
  for (const Vec& a : actions) p.x.push_back(basis.transpose() * a);
  return p;
}

Mat gram(const Projected& p, std::span<const double> w) {
  Mat g = Mat::Zero(p.rank, p.rank);
  for (std::size_t i = 0; i < p.x.size(); ++i)
    if (w[i] > 0.0) g.noalias() += w[i] * p.x[i] * p.x[i].transpose();
  return g;
}

std::vector<double> leverage(const Projected& p, std::span<const double> w) {
  std::vector<double> g(p.x.size(), 0.0);
  if (p.rank == 0) return g;
  const Mat inv = pinv_psd(gram(p, w));
  for (std::size_t i = 0; i < p.x.size(); ++i) g[i] = p.x[i].dot(inv * p.x[i]);
  return g;
}

}  // namespace

double design_objective(std::span<const Vec> actions, std::span<const double> weights) {
  require(!actions.empty(), "design needs at least one action");
  require(weights.size() == actions.size(), "one weight per action");
  const Projected p = project(actions);
  const auto g = leverage(p, weights);
  return *std::max_element(g.begin(), g.end());
}

Design compute_design(std::span<const Vec> actions, int max_support) {
  require(!actions.empty(), "design needs at least one action");
  const int d = static_cast<int>(actions.front().size());
  for (const Vec& a : actions) require(a.size() == d, "actions differ in dimension");
  const std::size_t n = actions.size();
  const Projected p = project(actions);
  const double dprime = p.rank;
  const double certificate = 2.0 * d;

  Design out;
  out.weights.assign(n, 1.0 / static_cast<double>(n));
  if (p.rank > 0) {
    for (int it = 0; it < kMaxIterations; ++it) {
      const auto g = leverage(p, out.weights);
      std::size_t up = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (g[i] > g[up]) up = i;
      if (g[up] <= kTargetSlack * dprime) break;
      // Away candidate: supported action with the smallest leverage.
      std::size_t down = n;
      for (std::size_t i = 0; i < n; ++i)
        if (out.weights[i] > 0.0 && (down == n || g[i] < g[down])) down = i;
      const double gain_up = g[up] - dprime;
      const double gain_down = dprime - g[down];
      std::size_t j = up;
      double tau = gain_up / (dprime * (g[up] - 1.0));
      if (gain_down > gain_up && out.weights[down] < 1.0) {
        j = down;
        const double floor = -out.weights[down] / (1.0 - out.weights[down]);
        tau = g[down] > 1.0 ? (g[down] - dprime) / (dprime * (g[down] - 1.0)) : floor;
        tau = std::max(tau, floor);
      }
      for (double& w : out.weights) w *= 1.0 - tau;
      out.weights[j] += tau;
      if (out.weights[j] < 1e-15) out.weights[j] = 0.0;
    }
  }

  auto count_support = [&] {
    return static_cast<int>(std::count_if(out.weights.begin(), out.weights.end(), [](double w) { return w > 0.0; }));
  };
  auto normalise = [](std::vector<double>& w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
  };
  normalise(out.weights);

  while (count_support() > max_support) {
    std::size_t smallest = n;
    for (std::size_t i = 0; i < n; ++i)
      if (out.weights[i] > 0.0 && (smallest == n || out.weights[i] < out.weights[smallest])) smallest = i;
    std::vector<double> trial = out.weights;
    trial[smallest] = 0.0;
    normalise(trial);
    const auto g = leverage(p, trial);
    // Removing a direction the rest of the support does not cover breaks the span.
    const Mat gm = gram(p, trial);
    Eigen::SelfAdjointEigenSolver<Mat> es(gm);
    const bool spans = p.rank == 0 || es.eigenvalues().minCoeff() > kRankTolerance * std::max(1.0, es.eigenvalues().maxCoeff());
    if (!spans || *std::max_element(g.begin(), g.end()) > certificate) break;
    out.weights = std::move(trial);
  }

  const auto g = leverage(p, out.weights);
  out.objective = *std::max_element(g.begin(), g.end());
  out.support = count_support();
  require(out.objective <= certificate + 1e-9, "design certificate violated");
  require(out.support <= std::max(max_support, 1), "design support exceeds m0");
  return out;
}

int pe_m0(int d) {
  require(d >= 1, "dimension must be positive");
  int loglog = 0;
  if (d >= 3) loglog = std::max(0, static_cast<int>(std::ceil(std::log(std::log(static_cast<double>(d))))));
  return 4 * d * (loglog + 18);
}

std::vector<long long> pe_schedule(std::span<const double> zeta, double m_k, int m0) {
  std::vector<long long> u(zeta.size(), 0);
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    if (zeta[i] <= 0.0) continue;
    // The small guard keeps exact products such as 720 * (1/72) from rounding up.
    u[i] = static_cast<long long>(std::ceil(m_k * std::max(zeta[i], 1.0 / m0) - 1e-9));
  }
  return u;
}

}  // namespace cobe
