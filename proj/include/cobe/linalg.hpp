#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace cobe {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Eigenvalues at or below this (relative to max(1, largest)) count as zero.
inline constexpr double kRankTolerance = 1e-10;

/// Orthonormal basis, one column per direction, of the span of `vs`.
/// Zero columns when every vector is zero.
Mat span_basis(std::span<const Vec> vs, int dim);

/// Moore-Penrose inverse of a symmetric positive semidefinite matrix.
Mat pinv_psd(const Mat& m);

}  // namespace cobe
