#include "gswb/bregman.hpp"

#include <cmath>

#include "gswb/error.hpp"
#include "logsumexp.hpp"

namespace gswb {

UnrolledBarycenter::UnrolledBarycenter(Matrix log_kernel, int iterations)
    : log_kernel_(std::move(log_kernel)), iterations_(iterations) {
  if (log_kernel_.rows() == 0 || log_kernel_.rows() != log_kernel_.cols()) {
    throw ValidationError("log kernel must be square and non-empty");
  }
  if (iterations_ < 1) throw ValidationError("barycenter needs at least one iteration");
}

Vector UnrolledBarycenter::forward(const Matrix& log_atoms, const Vector& weights, bool record) {
  const Index n = size();
  const Index m = log_atoms.rows();
  if (log_atoms.cols() != n) throw ValidationError("atom length does not match the kernel");
  if (weights.size() != m) throw ValidationError("one weight per atom is required");

  weights_ = weights;
  recorded_ = record;
  tape_.clear();
  if (record) tape_.resize(static_cast<std::size_t>(iterations_));

  std::vector<Vector> g(static_cast<std::size_t>(m), Vector::Zero(n));
  std::vector<Vector> phi(static_cast<std::size_t>(m));
  Vector r;
  Vector f;
  Vector log_b = Vector::Zero(n);
  Vector prev_log_b;

  for (int it = 0; it < iterations_; ++it) {
    Step* step = record ? &tape_[static_cast<std::size_t>(it)] : nullptr;
    if (step) step->atoms.resize(static_cast<std::size_t>(m));

    Vector mix = Vector::Zero(n);
    for (Index k = 0; k < m; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      AtomStep* rec = step ? &step->atoms[ks] : nullptr;
      detail::row_logsumexp(log_kernel_, g[ks], r, rec ? &rec->row_weights : nullptr);
      f = log_atoms.row(k).transpose() - r;
      detail::col_logsumexp(log_kernel_, f, phi[ks], rec ? &rec->col_weights : nullptr);
      if (weights(k) != 0.0) mix += weights(k) * phi[ks];
      if (rec) {
        rec->f = f;
        rec->phi = phi[ks];
      }
    }

    prev_log_b = log_b;
    log_b = mix.cwiseMax(kLogFloor);
    if (step) step->clamped = mix.array() < kLogFloor;
    for (Index k = 0; k < m; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      g[ks] = log_b - phi[ks];
    }
  }
  if (!log_b.allFinite()) throw NumericalError("barycenter iterations produced non-finite values");
  last_change_ = iterations_ > 1 ? (log_b - prev_log_b).cwiseAbs().maxCoeff() : 0.0;
  return log_b;
}

void UnrolledBarycenter::backward(const Vector& grad_log_b, Matrix& grad_log_atoms,
                                  Vector& grad_weights) const {
  if (!recorded_) throw ValidationError("backward() needs a recorded forward()");
  const Index n = size();
  const Index m = weights_.size();
  if (grad_log_b.size() != n) throw ValidationError("gradient length does not match the kernel");

  grad_log_atoms = Matrix::Zero(m, n);
  grad_weights = Vector::Zero(m);

  std::vector<Vector> grad_g(static_cast<std::size_t>(m), Vector::Zero(n));
  Vector grad_lb_external = grad_log_b;

  for (int it = iterations_ - 1; it >= 0; --it) {
    const Step& step = tape_[static_cast<std::size_t>(it)];

    // g_k = log b - phi_k
    Vector grad_lb = grad_lb_external;
    for (const Vector& gg : grad_g) grad_lb += gg;
    const Vector grad_mix = step.clamped.select(Vector::Zero(n), grad_lb);

    for (Index k = 0; k < m; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      const AtomStep& rec = step.atoms[ks];

      // log b = sum_k lambda_k phi_k
      Vector grad_phi = -grad_g[ks];
      if (weights_(k) != 0.0) grad_phi += weights_(k) * grad_mix;
      grad_weights(k) += grad_mix.dot(rec.phi);

      // phi_k = LSE_cols(logK + f_k)
      const Vector grad_f = (rec.col_weights.matrix() * grad_phi);

      // f_k = log a_k - r_k,  r_k = LSE_rows(logK + g_k)
      grad_log_atoms.row(k) += grad_f.transpose();
      grad_g[ks] = -(rec.row_weights.matrix().transpose() * grad_f);
    }
    grad_lb_external.setZero();
  }
}

}  // namespace gswb
