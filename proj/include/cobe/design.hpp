#pragma once

#include <span>
#include <vector>

#include "cobe/linalg.hpp"

namespace cobe {

struct Design {
  std::vector<double> weights;  // one per action, sums to 1
  double objective = 0.0;       // max_a ||a||^2 over the pseudo-inverse of Gamma
  int support = 0;
};

/// max_a ||a||^2_{Gamma(weights)^+} with Gamma = sum w a a^T, evaluated on the
/// span of the actions.
double design_objective(std::span<const Vec> actions, std::span<const double> weights);

/// Near D-optimal design by Frank-Wolfe with away steps, then pruning of the
/// smallest weights while the support exceeds `max_support` and the squared
/// certificate max_a ||a||^2 <= 2d still holds. Throws on an empty set.
Design compute_design(std::span<const Vec> actions, int max_support);

/// m0 = 4d ([ceil(ln ln d)]_+ + 18).
int pe_m0(int d);

/// u(a) = ceil(m_k max{zeta(a), 1/m0}) on the support, 0 elsewhere.
std::vector<long long> pe_schedule(std::span<const double> zeta, double m_k, int m0);

}  // namespace cobe
