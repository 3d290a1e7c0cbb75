#include "cobe/linalg.hpp"

#include <algorithm>

namespace cobe {

Mat span_basis(std::span<const Vec> vs, int dim) {
  Mat scatter = Mat::Zero(dim, dim);
  for (const Vec& v : vs) scatter.noalias() += v * v.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> eig(scatter);
  const auto& vals = eig.eigenvalues();
  const double cutoff = kRankTolerance * std::max(1.0, vals.size() ? vals.maxCoeff() : 0.0);
  std::vector<int> keep;
  for (int i = 0; i < vals.size(); ++i)
    if (vals(i) > cutoff) keep.push_back(i);
  Mat basis(dim, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) basis.col(j) = eig.eigenvectors().col(keep[j]);
  return basis;
}

Mat pinv_psd(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(m);
  const auto& vals = eig.eigenvalues();
  const double cutoff = kRankTolerance * std::max(1.0, vals.size() ? vals.maxCoeff() : 0.0);
  Vec inv = Vec::Zero(vals.size());
  for (int i = 0; i < vals.size(); ++i)
    if (vals(i) > cutoff) inv(i) = 1.0 / vals(i);
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace cobe
