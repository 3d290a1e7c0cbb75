#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cobe/linalg.hpp"
#include "cobe/tabular_mdp.hpp"

namespace cobe {

/// Fixed finite action set with means <w*, a> in [0, 1].
struct LinearBandit {
  std::vector<Vec> arms;
  Vec w_star;

  int dim() const { return static_cast<int>(w_star.size()); }
  std::vector<double> means() const;
  int best_arm() const;  // lowest index among the maximisers
  void validate() const;
};

/// Two-dimensional instance with K arms interpolating e1 -> e2 and
/// best-minus-second gap exactly `gap`. Arm 0 is optimal.
LinearBandit gap_bandit(int arms, double gap);

/// K random arms in R^d with means in [0, 1] (unit-sphere directions folded
/// onto the half-space where <w*, a> >= 0).
LinearBandit random_linear_bandit(int arms, int d, Rng& rng);

/// Produces the round's action set A_t (the context) for round t >= 1.
using ActionSetGenerator = std::function<std::vector<Vec>(int t, Rng& rng)>;

/// Linear contextual bandit: policies are parameters w, context is A_t and the
/// policy w plays argmax_{a in A_t} <w, a>. Learners report the chosen index.
struct ContextualBandit {
  Vec w_star;
  ActionSetGenerator generator;

  int dim() const { return static_cast<int>(w_star.size()); }
  std::vector<double> means(std::span<const Vec> actions) const;
};

/// `count` unit-sphere actions per round, folded so <w*, a> >= 0.
ActionSetGenerator sphere_action_sets(Vec w_star, int count);

/// Two-action sets {(1/2, s/2), (1/2, -s/2)} with s = 1 for t <= C and
/// s = eps afterwards; an affine embedding of the 1-d lower-bound instance.
ActionSetGenerator lower_bound_action_sets(int corrupted_rounds, double eps);

/// c_t for bandits: max over the offered actions of |mu - mu_t|.
double corruption_magnitude_bandit(std::span<const double> clean, std::span<const double> corrupted);

/// Linear MDP: sigma(s, a) = phi(s, a)^T rho and p(s' | s, a) = phi(s, a)^T nu(s').
struct LinearMdp {
  int S = 1;
  int A = 1;
  int H = 1;
  int s1 = 0;
  Mat phi;  // (S*A) x d, row s*A + a
  Vec rho;  // d
  Mat nu;   // S x d, row s'

  int dim() const { return static_cast<int>(rho.size()); }
  Vec feature(int s, int a) const { return phi.row(static_cast<Eigen::Index>(s) * A + a).transpose(); }
  void validate() const;
  TabularMdp to_tabular() const;
};

/// Every tabular MDP is a linear MDP with one-hot features of dimension S*A.
LinearMdp onehot_linear_mdp(const TabularMdp& m);

/// Expected return of `pi` from `s` computed through (phi, rho, nu) directly.
double policy_value(const LinearMdp& m, const Policy& pi, int s);

}  // namespace cobe
