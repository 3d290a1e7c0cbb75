#include "cobe/linear_envs.hpp"

#include <algorithm>
#include <cmath>

namespace cobe {

namespace {
constexpr double kMeanSlack = 1e-12;
}

std::vector<double> LinearBandit::means() const {
  std::vector<double> mu;
  mu.reserve(arms.size());
  for (const Vec& a : arms) mu.push_back(w_star.dot(a));
  return mu;
}

int LinearBandit::best_arm() const {
  const auto mu = means();
  return static_cast<int>(std::max_element(mu.begin(), mu.end()) - mu.begin());
}

void LinearBandit::validate() const {
  require(!arms.empty(), "linear bandit needs at least one arm");
  for (const Vec& a : arms) {
    require(a.size() == w_star.size(), "arm dimension differs from w*");
    const double mu = w_star.dot(a);
    require(mu >= -kMeanSlack && mu <= 1.0 + kMeanSlack, "arm mean outside [0, 1]");
  }
}

LinearBandit gap_bandit(int arms, double gap) {
  require(arms >= 2, "gap bandit needs at least two arms");
  const double spread = (arms - 1) * gap;
  require(gap > 0.0 && spread <= 1.0, "gap too large for this many arms");
  LinearBandit b;
  b.w_star = Vec(2);
  b.w_star << 0.5 + spread / 2.0, 0.5 - spread / 2.0;
  for (int k = 0; k < arms; ++k) {
    const double lambda = static_cast<double>(k) / (arms - 1);
    Vec a(2);
    a << 1.0 - lambda, lambda;
    b.arms.push_back(a);
  }
  return b;
}

namespace {

Vec random_unit(int d, Rng& rng) {
  Vec v(d);
  do {
    for (int i = 0; i < d; ++i) {
      // Box-Muller; one normal per pair of uniforms keeps the draw count fixed.
      const double u1 = 1.0 - rng.uniform();
      const double u2 = rng.uniform();
      v(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

}  // namespace

LinearBandit random_linear_bandit(int arms, int d, Rng& rng) {
  require(arms >= 1 && d >= 1, "random bandit needs arms >= 1 and d >= 1");
  LinearBandit b;
  b.w_star = random_unit(d, rng);
  for (int k = 0; k < arms; ++k) {
    Vec a = random_unit(d, rng);
    if (b.w_star.dot(a) < 0.0) a = -a;
    b.arms.push_back(a);
  }
  return b;
}

std::vector<double> ContextualBandit::means(std::span<const Vec> actions) const {
  std::vector<double> mu;
  mu.reserve(actions.size());
  for (const Vec& a : actions) mu.push_back(w_star.dot(a));
  return mu;
}

ActionSetGenerator sphere_action_sets(Vec w_star, int count) {
  require(count >= 1, "action sets need at least one action");
  return [w_star = std::move(w_star), count](int, Rng& rng) {
    std::vector<Vec> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
      Vec a = random_unit(static_cast<int>(w_star.size()), rng);
      if (w_star.dot(a) < 0.0) a = -a;
      out.push_back(a);
    }
    return out;
  };
}

ActionSetGenerator lower_bound_action_sets(int corrupted_rounds, double eps) {
  return [corrupted_rounds, eps](int t, Rng&) {
    const double s = t <= corrupted_rounds ? 1.0 : eps;
    Vec plus(2), minus(2);
    plus << 0.5, 0.5 * s;
    minus << 0.5, -0.5 * s;
    return std::vector<Vec>{plus, minus};
  };
}

double corruption_magnitude_bandit(std::span<const double> clean, std::span<const double> corrupted) {
  require(clean.size() == corrupted.size(), "mean vectors differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) worst = std::max(worst, std::abs(clean[i] - corrupted[i]));
  return worst;
}

void LinearMdp::validate() const {
  const int d = dim();
  require(phi.rows() == static_cast<Eigen::Index>(S) * A && phi.cols() == d, "phi has the wrong shape");
  require(nu.rows() == S && nu.cols() == d, "nu has the wrong shape");
  for (Eigen::Index i = 0; i < phi.rows(); ++i) {
    require(phi.row(i).norm() <= 1.0 + 1e-12, "feature norm exceeds 1");
    double total = 0.0;
    for (int s2 = 0; s2 < S; ++s2) {
      const double q = phi.row(i).dot(nu.row(s2));
      require(q >= -1e-12, "phi^T nu(s') is negative");
      total += q;
    }
    require(std::abs(total - 1.0) <= 1e-10, "phi^T nu does not sum to one");
    const double r = phi.row(i).dot(rho);
    require(r >= -1e-12 && r <= 1.0 / H + 1e-12, "phi^T rho outside [0, 1/H]");
  }
  require(rho.norm() <= std::sqrt(static_cast<double>(d)) / H + 1e-12, "||rho|| exceeds sqrt(d)/H");
  require(nu.colwise().sum().norm() <= std::sqrt(static_cast<double>(d)) + 1e-10,
          "||sum nu|| exceeds sqrt(d)");
}

TabularMdp LinearMdp::to_tabular() const {
  TabularMdp m;
  m.S = S;
  m.A = A;
  m.H = H;
  m.s1 = s1;
  const std::size_t pairs = static_cast<std::size_t>(S) * A;
  m.kernel.p.resize(pairs * S);
  m.kernel.sigma.resize(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto f = phi.row(static_cast<Eigen::Index>(i));
    for (int s2 = 0; s2 < S; ++s2) m.kernel.p[i * S + s2] = std::max(0.0, f.dot(nu.row(s2)));
    m.kernel.sigma[i] = std::clamp(f.dot(rho), 0.0, 1.0 / H);
  }
  return m;
}

LinearMdp onehot_linear_mdp(const TabularMdp& m) {
  m.validate();
  const int d = m.S * m.A;
  LinearMdp lm;
  lm.S = m.S;
  lm.A = m.A;
  lm.H = m.H;
  lm.s1 = m.s1;
  lm.phi = Mat::Identity(d, d);
  lm.rho = Vec(d);
  lm.nu = Mat(m.S, d);
  for (int i = 0; i < d; ++i) {
    lm.rho(i) = m.kernel.sigma[i];
    for (int s2 = 0; s2 < m.S; ++s2) lm.nu(s2, i) = m.kernel.p[static_cast<std::size_t>(i) * m.S + s2];
  }
  return lm;
}

double policy_value(const LinearMdp& m, const Policy& pi, int s) {
  require(pi.actions.size() == static_cast<std::size_t>(m.H) * m.S, "policy table has the wrong size");
  // V_h = phi_pi (rho + nu^T V_{h+1}) layer by layer.
  Vec next = Vec::Zero(m.S);
  for (int h = m.H - 1; h >= 0; --h) {
    const Vec backup = m.rho + m.nu.transpose() * next;
    Vec cur(m.S);
    for (int x = 0; x < m.S; ++x) {
      const int a = pi.actions[static_cast<std::size_t>(h) * m.S + x];
      require(a >= 0 && a < m.A, "policy action out of range");
      cur(x) = m.feature(x, a).dot(backup);
    }
    next = cur;
  }
  return next(s);
}

}  // namespace cobe
