#pragma once

#include <cstdint>
#include <vector>

#include "cobe/core.hpp"

namespace cobe {

/// Transition kernel and mean rewards of a tabular MDP.
/// p[(s * A + a) * S + s2] = p(s2 | s, a), sigma[s * A + a] = sigma(s, a).
struct Kernel {
  std::vector<double> p;
  std::vector<double> sigma;
};

/// Episodic tabular MDP with per-step rewards in [0, 1/H], so an episode's
/// return lies in [0, 1].
struct TabularMdp {
  int S = 1;
  int A = 1;
  int H = 1;
  int s1 = 0;
  Kernel kernel;
  /// Horizon that sets the reward scale 1/H and the c_t multiplier. Zero means
  /// H. Differs from H only for derived MDPs that prepend bookkeeping steps.
  int reward_horizon = 0;
  /// Optional action mask, allowed[(h * S + s) * A + a]; empty allows everything.
  std::vector<std::uint8_t> allowed;

  int scale() const { return reward_horizon > 0 ? reward_horizon : H; }
  double reward_cap() const { return 1.0 / scale(); }
  double c_max() const { return 2.0 * scale(); }
  double p(int s, int a, int s2) const { return kernel.p[(static_cast<std::size_t>(s) * A + a) * S + s2]; }
  double sigma(int s, int a) const { return kernel.sigma[static_cast<std::size_t>(s) * A + a]; }
  bool is_allowed(int h, int s, int a) const {
    return allowed.empty() || allowed[(static_cast<std::size_t>(h) * S + s) * A + a] != 0;
  }

  /// Shape, probability vectors (to 1e-12) and reward range of `k`.
  void validate_kernel(const Kernel& k) const;
  void validate() const;
};

/// Row-stochastic kernel with Dirichlet(1) rows and rewards uniform in [0, 1/H].
TabularMdp random_tabular_mdp(int S, int A, int H, Rng& rng, int s1 = 0);

/// Throws ContractError unless `pi` names an allowed action at every (h, s).
void check_policy(const TabularMdp& m, const Policy& pi);

/// Exact expected return of `pi` from state `s` under `k`, by backward induction.
double policy_value(const TabularMdp& m, const Policy& pi, const Kernel& k, int s);
inline double policy_value(const TabularMdp& m, const Policy& pi) {
  return policy_value(m, pi, m.kernel, m.s1);
}

struct OptimalSolution {
  std::vector<double> v1;  // optimal value per initial state
  Policy policy;           // greedy, lowest-index tie-break
};

/// Optimal values and policy respecting the action mask.
OptimalSolution solve_optimal(const TabularMdp& m, const Kernel& k);

/// c_t = H * max_{s,a} sup_{V in [0,1]^S} |(T V - T_t V)(s, a)|, evaluated in
/// closed form as H * max_{s,a} (|dsigma| + 0.5 * ||dp(.|s,a)||_1).
double corruption_magnitude_mdp(const TabularMdp& m, const Kernel& orig, const Kernel& corrupted);

struct Episode {
  std::vector<Step> steps;
  double reward = 0.0;
};

/// Plays `pi` for H steps from `s`. Each step draws the reward
/// Bernoulli(H sigma) / H first, then the next state.
Episode simulate_episode(const TabularMdp& m, const Kernel& k, const Policy& pi, int s, Rng& rng);

}  // namespace cobe
