#include <Eigen/Eigenvalues>
#include <numbers>

#include "doctest.h"
#include "gswb/error.hpp"
#include "gswb/spectral.hpp"
#include "support.hpp"

using namespace gswb;

TEST_CASE("signals must be finite histograms") {
  CHECK_NOTHROW(GraphSignal(Vector::Constant(4, 0.25)));
  CHECK_THROWS_AS(GraphSignal(Vector::Constant(4, 0.3)), ValidationError);
  Vector neg(3);
  neg << 1.5, -0.5, 0.0;
  CHECK_THROWS_AS(GraphSignal{neg}, ValidationError);
  Vector nan = Vector::Constant(2, 0.5);
  nan(0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(GraphSignal{nan}, ValidationError);
  CHECK_THROWS_AS(GraphSignal{Vector()}, ValidationError);
  CHECK(GraphSignal::delta(5, 2)[2] == 1.0);
  CHECK(GraphSignal::uniform(4)[3] == 0.25);
}

TEST_CASE("laplacian rows sum to zero") {
  std::mt19937_64 rng(5);
  const Graph g = testing::random_connected_graph(15, rng);
  const Matrix l = laplacian(g);
  CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(l.isApprox(l.transpose()));
}

TEST_CASE("jacobi eigensolver matches a reference solver") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix l = laplacian(testing::random_connected_graph(10 + 7 * trial, rng));
    const Spectrum s = eigendecompose(l);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(l);
    CHECK((s.eigvals - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
    const Index n = l.rows();
    CHECK((s.eigvecs.transpose() * s.eigvecs - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    const Matrix rebuilt = s.eigvecs * s.eigvals.asDiagonal() * s.eigvecs.transpose();
    CHECK((rebuilt - l).cwiseAbs().maxCoeff() < 1e-10);
    for (Index k = 1; k < n; ++k) CHECK(s.eigvals(k) >= s.eigvals(k - 1));
  }
}

TEST_CASE("ring spectrum has the closed form 2 - 2 cos(2 pi k / n)") {
  const Index n = 12;
  const Spectrum s = graph_spectrum(build_ring_graph(n));
  std::vector<double> expected;
  for (Index k = 0; k < n; ++k) {
    expected.push_back(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / n));
  }
  std::sort(expected.begin(), expected.end());
  for (Index k = 0; k < n; ++k) CHECK(s.eigvals(k) == doctest::Approx(expected[k]).epsilon(1e-12));
}

TEST_CASE("eigendecompose rejects asymmetric input") {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eigendecompose(m), ValidationError);
}

TEST_CASE("heat kernel properties") {
  const Graph g = build_ring_graph(20);
  const Spectrum s = graph_spectrum(g);

  const GraphSignal at_zero = localize_heat_kernel(s, 0.0, 3);
  CHECK(at_zero[3] == doctest::Approx(1.0));

  const GraphSignal h = localize_heat_kernel(s, 2.0, 5);
  Index peak = 0;
  h.values().maxCoeff(&peak);
  CHECK(peak == 5);
  CHECK(h[4] == doctest::Approx(h[6]));
  CHECK(h.values().sum() == doctest::Approx(1.0));

  // e^{-tau L} is symmetric, so the kernel at i seen from j equals the reverse.
  const GraphSignal other = localize_heat_kernel(s, 2.0, 9);
  CHECK(h[9] == doctest::Approx(other[5]).epsilon(1e-12));

  // Longer diffusion spreads the mass.
  CHECK(localize_heat_kernel(s, 8.0, 5)[5] < h[5]);

  CHECK_THROWS_AS(localize_heat_kernel(s, -1.0, 0), ValidationError);
  CHECK_THROWS_AS(localize_heat_kernel(s, 1.0, 20), ValidationError);
}

TEST_CASE("GFT round trip and Parseval") {
  std::mt19937_64 rng(2);
  const Graph g = testing::random_connected_graph(16, rng);
  const Spectrum s = graph_spectrum(g);
  const GraphSignal x = testing::random_signal(16, rng);
  const Vector c = gft(s, x);
  CHECK((igft(s, c) - x.values()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(c.squaredNorm() == doctest::Approx(x.values().squaredNorm()).epsilon(1e-12));
  // The constant eigenvector carries the mean.
  CHECK(std::abs(c(0)) == doctest::Approx(1.0 / std::sqrt(16.0)));
}

TEST_CASE("normalize_to_simplex") {
  Vector v(3);
  v << 1.0, 3.0, 0.0;
  CHECK(normalize_to_simplex(v)[1] == doctest::Approx(0.75));
  CHECK_THROWS_AS(normalize_to_simplex(Vector::Zero(3)), ValidationError);
  v(2) = -1.0;
  CHECK_THROWS_AS(normalize_to_simplex(v), ValidationError);
}
