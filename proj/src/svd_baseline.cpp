#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "gswb/dictlearn.hpp"
#include "gswb/error.hpp"

namespace gswb {

SvdBaseline svd_baseline(const Matrix& x, Index rank) {
  const Index s = x.rows();
  const Index n = x.cols();
  if (s == 0 || n == 0) throw ValidationError("svd baseline needs a non-empty data matrix");
  if (rank < 1 || rank > std::min(s, n)) {
    throw ValidationError("rank " + std::to_string(rank) + " outside [1, " +
                          std::to_string(std::min(s, n)) + "]");
  }
  if (!x.allFinite()) throw ValidationError("data matrix has non-finite entries");

  SvdBaseline out;
  out.column_means = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - out.column_means.transpose();

  const Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.singular_values = svd.singularValues();
  Matrix u = svd.matrixU().leftCols(rank);
  Matrix v = svd.matrixV().leftCols(rank);
  // Deterministic signs: first entry of each component with |.| > 1e-10 positive.
  for (Index k = 0; k < rank; ++k) {
    for (Index i = 0; i < n; ++i) {
      if (std::abs(v(i, k)) > 1e-10) {
        if (v(i, k) < 0.0) {
          v.col(k) = -v.col(k);
          u.col(k) = -u.col(k);
        }
        break;
      }
    }
  }
  out.components = v.transpose();
  const Matrix approx = u * out.singular_values.head(rank).asDiagonal() * v.transpose();
  out.residual = (centered - approx).norm();
  out.reconstructions = approx.rowwise() + out.column_means.transpose();
  return out;
}

SvdBaseline svd_baseline(const std::vector<GraphSignal>& x, Index rank) {
  return svd_baseline(stack_signals(x), rank);
}

}  // namespace gswb
