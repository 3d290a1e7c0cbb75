#pragma once

// Brute-force references. Slow on purpose and size-capped; they refuse
// instead of approximating.

#include <span>
#include <vector>

#include "cobe/linalg.hpp"
#include "cobe/linear_envs.hpp"
#include "cobe/tabular_mdp.hpp"

namespace cobe {

struct PolicyValue {
  Policy policy;
  double value = 0.0;
};

struct PolicyTable {
  std::vector<PolicyValue> rows;  // sorted by value, descending; ties by policy
  double gap = 0.0;               // best minus second-best value
  bool degenerate = false;        // the optimum is shared
};

/// Every deterministic policy of `m` (respecting its action mask), valued
/// exactly. Refuses when S * H * log2(A) > 20.
PolicyTable enumerate_policies(const TabularMdp& m);
PolicyTable enumerate_policies(std::span<const double> arm_means);

/// Every deterministic policy up to its actions at unreachable (layer, state)
/// cells, which are set to the first allowed action. The value of a policy
/// never depends on those cells, so the maximum over the table is the maximum
/// over all policies. Walks layer by layer, branching only on the states the
/// choices so far can reach. Refuses beyond 2^20 policies.
PolicyTable enumerate_reachable_policies(const TabularMdp& m);

/// Optimal value over all deterministic policies except `excluded`, by enumeration.
double best_value_excluding(const TabularMdp& m, const Policy& excluded);

/// H * max_{s,a} max_{V in {0,1}^S} |dsigma + dp . V|. Refuses S > 12.
double vertex_sup(const TabularMdp& m, const Kernel& orig, const Kernel& corrupted);

struct GridDesign {
  std::vector<double> weights;
  double objective = 0.0;
};

/// Grid search over the weight simplex (step `resolution`) for the design
/// minimising max_a ||a||^2 on the span. At most three actions.
GridDesign simplex_design_search(std::span<const Vec> actions, double resolution);

struct LowerBoundTrace {
  double regret = 0.0;
  double closed_form = 0.0;
  double eps = 0.0;
  std::vector<int> signs;   // +1 / -1 per round: the chosen action's sign
  long long suboptimal_large = 0;
  long long suboptimal_small = 0;
};

/// Noiseless one-dimensional least squares with a confidence interval
/// symmetric around the estimate. Action sets {-1, 1} for t <= C and
/// {-eps, eps} afterwards with eps = sqrt(C/T); rewards use w' = -1 for
/// t <= C and w* = 1 afterwards. The optimistic choice only depends on the
/// sign of the estimate (a zero estimate picks the positive action), so the
/// confidence radius never matters. Regret is accumulated in counts so the
/// result is exact.
LowerBoundTrace lower_bound_trace(long long corrupted, long long horizon);

/// 2(C - 1) + 2 eps min{C / eps^2, T - C} for C >= 1, and 0 for C = 0.
double lower_bound_closed_form(long long corrupted, long long horizon);

}  // namespace cobe
