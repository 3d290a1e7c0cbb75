#include "cobe/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cobe/errors.hpp"

namespace cobe {

namespace {

constexpr double kTieTolerance = 1e-12;

PolicyTable finish(std::vector<PolicyValue> rows) {
  std::sort(rows.begin(), rows.end(), [](const PolicyValue& a, const PolicyValue& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.policy < b.policy;
  });
  PolicyTable t;
  t.rows = std::move(rows);
  if (t.rows.size() >= 2) {
    const double diff = t.rows[0].value - t.rows[1].value;
    t.degenerate = diff <= kTieTolerance;
    t.gap = t.degenerate ? 0.0 : diff;
  }
  return t;
}

}  // namespace

PolicyTable enumerate_policies(const TabularMdp& m) {
  m.validate();
  const int cells = m.H * m.S;
  require(cells * std::log2(static_cast<double>(m.A)) <= 20.0 + 1e-9, "instance too large to enumerate");
  std::vector<std::vector<int>> options(cells);
  for (int h = 0; h < m.H; ++h)
    for (int s = 0; s < m.S; ++s)
      for (int a = 0; a < m.A; ++a)
        if (m.is_allowed(h, s, a)) options[h * m.S + s].push_back(a);
  for (const auto& o : options) require(!o.empty(), "a state has no allowed action");

  std::vector<PolicyValue> rows;
  std::vector<std::size_t> digit(cells, 0);
  Policy pi;
  pi.actions.resize(cells);
  while (true) {
    for (int c = 0; c < cells; ++c) pi.actions[c] = options[c][digit[c]];
    rows.push_back({pi, policy_value(m, pi, m.kernel, m.s1)});
    int c = cells - 1;
    while (c >= 0 && ++digit[c] == options[c].size()) digit[c--] = 0;
    if (c < 0) break;
  }
  return finish(std::move(rows));
}

PolicyTable enumerate_reachable_policies(const TabularMdp& m) {
  m.validate();
  constexpr std::size_t kCap = std::size_t{1} << 20;
  auto first_allowed = [&](int h, int s) {
    for (int a = 0; a < m.A; ++a)
      if (m.is_allowed(h, s, a)) return a;
    throw ContractError("a state has no allowed action");
  };
  Policy base;
  base.actions.resize(static_cast<std::size_t>(m.H) * m.S);
  for (int h = 0; h < m.H; ++h)
    for (int s = 0; s < m.S; ++s) base.actions[static_cast<std::size_t>(h) * m.S + s] = first_allowed(h, s);

  std::vector<PolicyValue> rows;
  // Depth-first over layers; `reach` holds the states reachable at layer h.
  auto descend = [&](auto&& self, int h, const std::vector<int>& reach, Policy& pi) -> void {
    if (h == m.H) {
      require(rows.size() < kCap, "too many reachable policies to enumerate");
      rows.push_back({pi, policy_value(m, pi, m.kernel, m.s1)});
      return;
    }
    std::vector<std::vector<int>> options(reach.size());
    for (std::size_t i = 0; i < reach.size(); ++i)
      for (int a = 0; a < m.A; ++a)
        if (m.is_allowed(h, reach[i], a)) options[i].push_back(a);
    std::vector<std::size_t> digit(reach.size(), 0);
    while (true) {
      std::vector<char> next(m.S, 0);
      for (std::size_t i = 0; i < reach.size(); ++i) {
        const int a = options[i][digit[i]];
        pi.actions[static_cast<std::size_t>(h) * m.S + reach[i]] = a;
        for (int y = 0; y < m.S; ++y)
          if (m.p(reach[i], a, y) > 0.0) next[y] = 1;
      }
      std::vector<int> reach_next;
      for (int y = 0; y < m.S; ++y)
        if (next[y]) reach_next.push_back(y);
      self(self, h + 1, reach_next, pi);
      std::size_t c = 0;
      while (c < reach.size() && ++digit[c] == options[c].size()) digit[c++] = 0;
      if (c == reach.size()) break;
    }
    for (int s : reach) pi.actions[static_cast<std::size_t>(h) * m.S + s] = first_allowed(h, s);
  };
  Policy pi = base;
  descend(descend, 0, {m.s1}, pi);
  return finish(std::move(rows));
}

PolicyTable enumerate_policies(std::span<const double> arm_means) {
  require(!arm_means.empty() && arm_means.size() <= (1u << 20), "arm count outside the enumerable range");
  std::vector<PolicyValue> rows;
  for (std::size_t a = 0; a < arm_means.size(); ++a) rows.push_back({Policy::arm(static_cast<int>(a)), arm_means[a]});
  return finish(std::move(rows));
}

double best_value_excluding(const TabularMdp& m, const Policy& excluded) {
  const PolicyTable t = enumerate_policies(m);
  for (const PolicyValue& row : t.rows)
    if (row.policy != excluded) return row.value;
  throw ContractError("no policy left after exclusion");
}

double vertex_sup(const TabularMdp& m, const Kernel& orig, const Kernel& corrupted) {
  require(m.S <= 12, "vertex enumeration refused for S > 12");
  const std::size_t pairs = static_cast<std::size_t>(m.S) * m.A;
  require(orig.p.size() == pairs * m.S && corrupted.p.size() == pairs * m.S && orig.sigma.size() == pairs &&
              corrupted.sigma.size() == pairs,
          "kernel shapes do not match");
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double ds = orig.sigma[i] - corrupted.sigma[i];
    for (unsigned mask = 0; mask < (1u << m.S); ++mask) {
      double v = ds;
      for (int y = 0; y < m.S; ++y)
        if (mask & (1u << y)) v += orig.p[i * m.S + y] - corrupted.p[i * m.S + y];
      worst = std::max(worst, std::abs(v));
    }
  }
  return m.scale() * worst;
}

GridDesign simplex_design_search(std::span<const Vec> actions, double resolution) {
  require(!actions.empty() && actions.size() <= 3, "grid search handles one to three actions");
  require(resolution > 0.0 && resolution <= 1.0, "resolution must lie in (0, 1]");
  const std::size_t n = actions.size();
  const Eigen::Index d = actions.front().size();

  // Orthonormal basis of the span via SVD of the stacked actions.
  Mat stacked(d, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) stacked.col(static_cast<Eigen::Index>(i)) = actions[i];
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinU);
  const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-8 * std::max(1.0, top)) ++rank;
  const Mat basis = svd.matrixU().leftCols(rank);

  auto objective = [&](const std::vector<double>& w) {
    if (rank == 0) return 0.0;
    Mat g = Mat::Zero(rank, rank);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec x = basis.transpose() * actions[i];
      g += w[i] * x * x.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    if (es.eigenvalues().minCoeff() <= 1e-12) return std::numeric_limits<double>::infinity();
    const Mat inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec x = basis.transpose() * actions[i];
      worst = std::max(worst, x.dot(inv * x));
    }
    return worst;
  };

  GridDesign best;
  best.objective = std::numeric_limits<double>::infinity();
  const long long steps = std::llround(1.0 / resolution);
  auto consider = [&](std::vector<double> w) {
    const double v = objective(w);
    if (v < best.objective) {
      best.objective = v;
      best.weights = std::move(w);
    }
  };
  if (n == 1) {
    consider({1.0});
  } else if (n == 2) {
    for (long long i = 0; i <= steps; ++i) {
      const double a = static_cast<double>(i) / steps;
      consider({a, 1.0 - a});
    }
  } else {
    for (long long i = 0; i <= steps; ++i)
      for (long long j = 0; i + j <= steps; ++j) {
        const double a = static_cast<double>(i) / steps, b = static_cast<double>(j) / steps;
        consider({a, b, std::max(0.0, 1.0 - a - b)});
      }
  }
  return best;
}

LowerBoundTrace lower_bound_trace(long long corrupted, long long horizon) {
  require(corrupted >= 0 && corrupted < horizon, "need 0 <= C < T");
  LowerBoundTrace out;
  const double root_c = std::sqrt(static_cast<double>(corrupted));
  const double root_t = std::sqrt(static_cast<double>(horizon));
  out.eps = root_c / root_t;
  const double w_star = 1.0, w_prime = -1.0;
  double lambda = 1.0;  // regulariser; only the sign of the estimate matters
  double moment = 0.0;  // sum a_tau r_tau
  out.signs.reserve(static_cast<std::size_t>(horizon));
  for (long long t = 1; t <= horizon; ++t) {
    const double w_hat = moment / lambda;
    const int sign = w_hat < 0.0 ? -1 : 1;
    const double scale = t <= corrupted ? 1.0 : out.eps;
    const double a = sign * scale;
    const double r = a * (t <= corrupted ? w_prime : w_star);
    moment += a * r;
    lambda += a * a;
    out.signs.push_back(sign);
    if (sign < 0) {
      if (t <= corrupted)
        ++out.suboptimal_large;
      else
        ++out.suboptimal_small;
    }
  }
  // 2 per large mistake, 2 eps = 2 sqrt(C) / sqrt(T) per small one.
  out.regret = 2.0 * static_cast<double>(out.suboptimal_large) +
               2.0 * static_cast<double>(out.suboptimal_small) * root_c / root_t;
  out.closed_form = lower_bound_closed_form(corrupted, horizon);
  return out;
}

double lower_bound_closed_form(long long corrupted, long long horizon) {
  if (corrupted == 0) return 0.0;
  const double c = static_cast<double>(corrupted), t = static_cast<double>(horizon);
  // C / eps^2 = T exactly for eps = sqrt(C/T).
  const double small = std::min(t, t - c);
  return 2.0 * (c - 1.0) + 2.0 * small * std::sqrt(c) / std::sqrt(t);
}

}  // namespace cobe
