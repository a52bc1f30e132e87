#include "gswb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gswb/error.hpp"

namespace gswb {

GraphSignal::GraphSignal(Vector values) : values_(std::move(values)) {
  if (values_.size() == 0) throw ValidationError("graph signal is empty");
  if (!values_.allFinite()) throw ValidationError("graph signal has non-finite entries");
  if (values_.minCoeff() < 0.0) {
    throw ValidationError("graph signal has negative entries");
  }
  if (std::abs(values_.sum() - 1.0) > kSumTolerance) {
    throw ValidationError("graph signal does not sum to one (sum = " +
                          std::to_string(values_.sum()) + ")");
  }
}

GraphSignal GraphSignal::delta(Index n, Index node) {
  if (node < 0 || node >= n) throw ValidationError("delta node out of range");
  Vector v = Vector::Zero(n);
  v(node) = 1.0;
  return GraphSignal(std::move(v));
}

GraphSignal GraphSignal::uniform(Index n) {
  return GraphSignal(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

Matrix laplacian(const Graph& g) {
  Matrix l = -g.weights;
  l.diagonal() = g.weights.rowwise().sum();
  return l;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

constexpr int kMaxSweeps = 100;

}  // namespace

Spectrum eigendecompose(const Matrix& l) {
  const Index n = l.rows();
  if (n == 0 || l.cols() != n) throw ValidationError("matrix must be square and non-empty");
  if (!l.allFinite()) throw ValidationError("matrix has non-finite entries");
  const double scale = std::max(1.0, l.norm());
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ValidationError("eigendecompose needs a symmetric matrix");
  }

  Matrix a = 0.5 * (l + l.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double threshold = 1e-11 * scale;

  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (++sweep > kMaxSweeps) throw NumericalError("Jacobi eigensolver did not converge");
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation zeroing a(p,q); t is the smaller root of t^2 + 2 theta t - 1.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  const Vector diag = a.diagonal();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return diag(x) < diag(y); });

  Spectrum out;
  out.eigvals.resize(n);
  out.eigvecs.resize(n, n);
  for (Index l_idx = 0; l_idx < n; ++l_idx) {
    out.eigvals(l_idx) = diag(order[l_idx]);
    Vector col = v.col(order[l_idx]);
    col.normalize();
    for (Index k = 0; k < n; ++k) {
      if (std::abs(col(k)) > 1e-10) {
        if (col(k) < 0.0) col = -col;
        break;
      }
    }
    out.eigvecs.col(l_idx) = col;
  }
  return out;
}

GraphSignal localize_heat_kernel(const Spectrum& s, double tau, Index center) {
  const Index n = s.size();
  if (center < 0 || center >= n) {
    throw ValidationError("center " + std::to_string(center) + " out of range [0," +
                          std::to_string(n) + ")");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be finite and >= 0");

  const Vector filter = (-tau * s.eigvals.array()).exp().matrix();
  const Vector at_center = s.eigvecs.row(center).transpose();
  Vector raw = s.eigvecs * filter.cwiseProduct(at_center);
  if (raw.minCoeff() < -1e-9) {
    throw NumericalError("heat kernel has a genuinely negative entry (" +
                         std::to_string(raw.minCoeff()) + ")");
  }
  raw = raw.cwiseMax(0.0);
  return normalize_to_simplex(raw);
}

GraphSignal diffusion_snapshot(const Spectrum& s, double tau, Index source) {
  return localize_heat_kernel(s, tau, source);
}

Vector gft(const Spectrum& s, const Vector& x) {
  if (x.size() != s.size()) throw ValidationError("signal/spectrum dimension mismatch");
  return s.eigvecs.transpose() * x;
}

Vector igft(const Spectrum& s, const Vector& coeffs) {
  if (coeffs.size() != s.size()) throw ValidationError("coefficient/spectrum dimension mismatch");
  return s.eigvecs * coeffs;
}

GraphSignal normalize_to_simplex(const Vector& v) {
  if (v.size() == 0) throw ValidationError("cannot normalize an empty vector");
  if (!v.allFinite()) throw ValidationError("cannot normalize a non-finite vector");
  if (v.minCoeff() < -1e-12) {
    throw ValidationError("vector has significantly negative entries (" +
                          std::to_string(v.minCoeff()) + ")");
  }
  Vector clipped = v.cwiseMax(0.0);
  const double total = clipped.sum();
  if (!(total > 0.0)) throw ValidationError("cannot normalize an all-zero vector");
  clipped /= total;
  return GraphSignal(std::move(clipped));
}

}  // namespace gswb
