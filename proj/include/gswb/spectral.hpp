#pragma once

#include "gswb/graph.hpp"
#include "gswb/types.hpp"

namespace gswb {

// Histogram on the vertices: non-negative entries summing to one. The
// constructor enforces both, so any GraphSignal in hand is on the simplex.
class GraphSignal {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit GraphSignal(Vector values);

  static GraphSignal delta(Index n, Index node);
  static GraphSignal uniform(Index n);

  const Vector& values() const { return values_; }
  Index size() const { return values_.size(); }
  double operator[](Index i) const { return values_(i); }

 private:
  Vector values_;
};

// Eigen-pairs of a symmetric matrix, eigenvalues ascending, eigenvector l in
// column l.
struct Spectrum {
  Vector eigvals;
  Matrix eigvecs;

  Index size() const { return eigvals.size(); }
};

// Combinatorial Laplacian Deg - W.
Matrix laplacian(const Graph& g);

// Cyclic Jacobi eigensolver. Sweeps until the off-diagonal Frobenius norm
// drops below 1e-11 (relative to max(1, |L|_F)). Each eigenvector is signed
// so its first entry with magnitude above 1e-10 is positive. Throws
// ValidationError for non-symmetric input.
Spectrum eigendecompose(const Matrix& l);

inline Spectrum graph_spectrum(const Graph& g) { return eigendecompose(laplacian(g)); }

// e^{-tau L} applied to the indicator of `center`, clipped at zero and
// normalized. tau = 0 returns the indicator itself.
GraphSignal localize_heat_kernel(const Spectrum& s, double tau, Index center);

// Heat diffusion from `source` observed at time tau; the same operator as
// localize_heat_kernel.
GraphSignal diffusion_snapshot(const Spectrum& s, double tau, Index source);

// Graph Fourier transform: coefficient l is <u_l, x>.
Vector gft(const Spectrum& s, const Vector& x);
inline Vector gft(const Spectrum& s, const GraphSignal& x) { return gft(s, x.values()); }
Vector igft(const Spectrum& s, const Vector& coeffs);

// l1 normalization onto the simplex. Entries in [-1e-12, 0) are treated as
// roundoff and clipped; anything more negative, or an all-zero input, throws.
GraphSignal normalize_to_simplex(const Vector& v);

}  // namespace gswb
