#include "cobe/tabular_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cobe {

namespace {

constexpr double kProbTolerance = 1e-12;

std::size_t pair_index(const TabularMdp& m, int s, int a) {
  return static_cast<std::size_t>(s) * m.A + a;
}

}  // namespace

void TabularMdp::validate_kernel(const Kernel& k) const {
  const std::size_t pairs = static_cast<std::size_t>(S) * A;
  require(k.p.size() == pairs * S && k.sigma.size() == pairs, "kernel shape does not match (S, A)");
  const double cap = reward_cap();
  for (std::size_t i = 0; i < pairs; ++i) {
    double total = 0.0;
    for (int s2 = 0; s2 < S; ++s2) {
      const double q = k.p[i * S + s2];
      require(q >= -kProbTolerance, "transition probability is negative");
      total += q;
    }
    if (std::abs(total - 1.0) > kProbTolerance) {
      std::ostringstream os;
      os << "transition row " << i << " sums to " << total;
      throw ContractError(os.str());
    }
    require(k.sigma[i] >= -kProbTolerance && k.sigma[i] <= cap + kProbTolerance,
            "mean reward outside [0, 1/H]");
  }
}

void TabularMdp::validate() const {
  require(S >= 1 && A >= 1 && H >= 1, "MDP needs S, A, H >= 1");
  require(s1 >= 0 && s1 < S, "initial state out of range");
  require(allowed.empty() || allowed.size() == static_cast<std::size_t>(H) * S * A,
          "action mask has the wrong size");
  validate_kernel(kernel);
}

TabularMdp random_tabular_mdp(int S, int A, int H, Rng& rng, int s1) {
  TabularMdp m;
  m.S = S;
  m.A = A;
  m.H = H;
  m.s1 = s1;
  const std::size_t pairs = static_cast<std::size_t>(S) * A;
  m.kernel.p.resize(pairs * S);
  m.kernel.sigma.resize(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    double total = 0.0;
    for (int s2 = 0; s2 < S; ++s2) {
      const double e = -std::log(1.0 - rng.uniform());
      m.kernel.p[i * S + s2] = e;
      total += e;
    }
    for (int s2 = 0; s2 < S; ++s2) m.kernel.p[i * S + s2] /= total;
    m.kernel.sigma[i] = rng.uniform() / H;
  }
  return m;
}

void check_policy(const TabularMdp& m, const Policy& pi) {
  require(pi.actions.size() == static_cast<std::size_t>(m.H) * m.S, "policy table has the wrong size");
  for (int h = 0; h < m.H; ++h)
    for (int s = 0; s < m.S; ++s) {
      const int a = pi.actions[static_cast<std::size_t>(h) * m.S + s];
      require(a >= 0 && a < m.A, "policy action out of range");
      require(m.is_allowed(h, s, a), "policy uses a forbidden action");
    }
}

double policy_value(const TabularMdp& m, const Policy& pi, const Kernel& k, int s) {
  check_policy(m, pi);
  require(s >= 0 && s < m.S, "initial state out of range");
  std::vector<double> next(m.S, 0.0), cur(m.S, 0.0);
  for (int h = m.H - 1; h >= 0; --h) {
    for (int x = 0; x < m.S; ++x) {
      const int a = pi.actions[static_cast<std::size_t>(h) * m.S + x];
      const std::size_t i = pair_index(m, x, a);
      double v = k.sigma[i];
      for (int y = 0; y < m.S; ++y) v += k.p[i * m.S + y] * next[y];
      cur[x] = v;
    }
    std::swap(cur, next);
  }
  return next[s];
}

OptimalSolution solve_optimal(const TabularMdp& m, const Kernel& k) {
  OptimalSolution out;
  out.policy.actions.assign(static_cast<std::size_t>(m.H) * m.S, 0);
  std::vector<double> next(m.S, 0.0), cur(m.S, 0.0);
  for (int h = m.H - 1; h >= 0; --h) {
    for (int x = 0; x < m.S; ++x) {
      double best = -1.0;
      int best_a = -1;
      for (int a = 0; a < m.A; ++a) {
        if (!m.is_allowed(h, x, a)) continue;
        const std::size_t i = pair_index(m, x, a);
        double q = k.sigma[i];
        for (int y = 0; y < m.S; ++y) q += k.p[i * m.S + y] * next[y];
        if (best_a < 0 || q > best) {
          best = q;
          best_a = a;
        }
      }
      require(best_a >= 0, "state has no allowed action");
      cur[x] = best;
      out.policy.actions[static_cast<std::size_t>(h) * m.S + x] = best_a;
    }
    std::swap(cur, next);
  }
  out.v1 = next;
  return out;
}

double corruption_magnitude_mdp(const TabularMdp& m, const Kernel& orig, const Kernel& corrupted) {
  const std::size_t pairs = static_cast<std::size_t>(m.S) * m.A;
  require(orig.p.size() == pairs * m.S && corrupted.p.size() == pairs * m.S &&
              orig.sigma.size() == pairs && corrupted.sigma.size() == pairs,
          "kernel shapes do not match");
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    double l1 = 0.0;
    for (int y = 0; y < m.S; ++y) l1 += std::abs(orig.p[i * m.S + y] - corrupted.p[i * m.S + y]);
    worst = std::max(worst, std::abs(orig.sigma[i] - corrupted.sigma[i]) + 0.5 * l1);
  }
  return m.scale() * worst;
}

Episode simulate_episode(const TabularMdp& m, const Kernel& k, const Policy& pi, int s, Rng& rng) {
  check_policy(m, pi);
  Episode ep;
  ep.steps.reserve(m.H);
  const double cap = m.reward_cap();
  for (int h = 0; h < m.H; ++h) {
    const int a = pi.actions[static_cast<std::size_t>(h) * m.S + s];
    const std::size_t i = pair_index(m, s, a);
    const double r = rng.bernoulli(k.sigma[i] / cap) ? cap : 0.0;
    const std::span<const double> row(k.p.data() + i * m.S, m.S);
    const int next = static_cast<int>(rng.categorical(row));
    ep.steps.push_back({s, a, r, next});
    ep.reward += r;
    s = next;
  }
  return ep;
}

}  // namespace cobe
