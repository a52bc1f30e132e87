#pragma once

#include <vector>

#include "gswb/types.hpp"

namespace gswb {

// Fixed-depth iterative Bregman projections for the entropic barycenter,
// carried out entirely on log-scalings. One iteration, per atom k:
//
//   f_k   = log a_k - LSE_rows(logK + g_k)        (u_k = a_k / K v_k)
//   phi_k = LSE_cols(logK + f_k)                  (log K^T u_k)
//   log b = max(sum_k lambda_k phi_k, -700)       (weighted geometric mean)
//   g_k   = log b - phi_k                         (v_k = b / K^T u_k)
//
// starting from g_k = 0. The depth is fixed so the whole map is a smooth
// function of (log atoms, lambda) that can be differentiated by replaying the
// iterations backwards; forward(..., record = true) keeps what backward()
// needs.
class UnrolledBarycenter {
 public:
  static constexpr double kLogFloor = -700.0;

  // log_kernel is -cost / alpha.
  UnrolledBarycenter(Matrix log_kernel, int iterations);

  // log_atoms is M x n, one log-histogram per row. Returns the unnormalized
  // log barycenter after the last iteration.
  Vector forward(const Matrix& log_atoms, const Vector& weights, bool record = false);

  // Reverse pass for the most recent recorded forward(). grad_log_b is the
  // derivative of a scalar loss with respect to the returned log barycenter.
  void backward(const Vector& grad_log_b, Matrix& grad_log_atoms, Vector& grad_weights) const;

  // max |log b^(L) - log b^(L-1)| of the last forward(); a convergence hint.
  double last_change() const { return last_change_; }

  int iterations() const { return iterations_; }
  Index size() const { return log_kernel_.rows(); }

 private:
  struct AtomStep {
    Vector f;
    Vector phi;
    Eigen::ArrayXXd row_weights;  // d r_k(i) / d g_k(j)
    Eigen::ArrayXXd col_weights;  // d phi_k(j) / d f_k(i)
  };
  struct Step {
    std::vector<AtomStep> atoms;
    Eigen::Array<bool, Eigen::Dynamic, 1> clamped;
  };

  Matrix log_kernel_;
  int iterations_;
  Vector weights_;
  std::vector<Step> tape_;
  bool recorded_ = false;
  double last_change_ = 0.0;
};

}  // namespace gswb
