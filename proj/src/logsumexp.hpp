#pragma once

#include <cmath>
#include <limits>

#include "gswb/types.hpp"

namespace gswb::detail {

using Array2 = Eigen::ArrayXXd;

// out(i) = log sum_j exp(logk(i, j) + z(j)). When `weights` is non-null it
// receives the softmax weights exp(logk(i, j) + z(j) - out(i)); each row sums
// to one.
inline void row_logsumexp(const Matrix& logk, const Vector& z, Vector& out,
                          Array2* weights = nullptr) {
  Array2 t = logk.array().rowwise() + z.transpose().array();
  Eigen::ArrayXd m = t.rowwise().maxCoeff();
  for (Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m(i))) m(i) = 0.0;
  }
  t.colwise() -= m;
  t = t.exp();
  const Eigen::ArrayXd s = t.rowwise().sum();
  out = (m + s.log()).matrix();
  if (weights) {
    t.colwise() /= s;
    *weights = std::move(t);
  }
}

// out(j) = log sum_i exp(logk(i, j) + z(i)); weights(i, j) =
// exp(logk(i, j) + z(i) - out(j)), each column sums to one.
inline void col_logsumexp(const Matrix& logk, const Vector& z, Vector& out,
                          Array2* weights = nullptr) {
  Array2 t = logk.array().colwise() + z.array();
  Eigen::ArrayXd m = t.colwise().maxCoeff().transpose();
  for (Index j = 0; j < m.size(); ++j) {
    if (!std::isfinite(m(j))) m(j) = 0.0;
  }
  t.rowwise() -= m.transpose();
  t = t.exp();
  const Eigen::ArrayXd s = t.colwise().sum().transpose();
  out = (m + s.log()).matrix();
  if (weights) {
    t.rowwise() /= s.transpose();
    *weights = std::move(t);
  }
}

}  // namespace gswb::detail
