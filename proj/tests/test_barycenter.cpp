#include "doctest.h"
#include "gswb/barycenter.hpp"
#include "gswb/bregman.hpp"
#include "gswb/error.hpp"
#include "gswb/experiments.hpp"
#include "gswb/transport.hpp"
#include "support.hpp"

using namespace gswb;

namespace {

Index argmax(const GraphSignal& x) {
  Index i = 0;
  x.values().maxCoeff(&i);
  return i;
}

}  // namespace

TEST_CASE("ring translation peaks at the midpoint") {
  const Graph g = build_ring_graph(32);
  const Spectrum s = graph_spectrum(g);
  const CostMatrix d = geodesic_cost_matrix(g);
  const GraphSignal a = localize_heat_kernel(s, 3.0, 0);
  const GraphSignal b = localize_heat_kernel(s, 3.0, 8);
  const GraphSignal bary = entropic_barycenter({{a, b}, iso_weights(2), d, 1e-3, 100});
  CHECK(argmax(bary) == 4);
  const auto [vertex, objective] = vertex_barycenter_oracle({a, b}, iso_weights(2), d);
  CHECK(vertex == 4);
  CHECK(objective(4) <= objective.minCoeff());

  const GraphSignal mean = euclidean_mean({a, b}, iso_weights(2));
  CHECK(local_maxima(g, mean.values()) == std::vector<Index>{0, 8});
}

TEST_CASE("unequal weights move the peak toward the heavier atom") {
  const Graph g = build_ring_graph(32);
  const Spectrum s = graph_spectrum(g);
  const CostMatrix d = geodesic_cost_matrix(g);
  const GraphSignal a = localize_heat_kernel(s, 3.0, 0);
  const GraphSignal b = localize_heat_kernel(s, 3.0, 8);
  Vector w(2);
  w << 0.75, 0.25;
  const Index peak = argmax(entropic_barycenter({{a, b}, w, d, 1e-3, 100}));
  CHECK(peak >= 1);
  CHECK(peak <= 3);
}

TEST_CASE("a one-hot weight returns that atom") {
  const Graph g = build_ring_graph(16);
  const Spectrum s = graph_spectrum(g);
  const CostMatrix d = geodesic_cost_matrix(g);
  const GraphSignal a = localize_heat_kernel(s, 2.0, 3);
  const GraphSignal b = localize_heat_kernel(s, 2.0, 11);
  Vector w(2);
  w << 1.0, 0.0;
  const GraphSignal bary = entropic_barycenter({{a, b}, w, d, 1e-3 * d.max(), 50});
  CHECK((bary.values() - a.values()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("identical atoms give the same result as a single atom") {
  std::mt19937_64 rng(6);
  const Graph g = testing::random_connected_graph(10, rng);
  const CostMatrix d = geodesic_cost_matrix(g);
  const GraphSignal x = testing::random_signal(10, rng);
  const GraphSignal one = entropic_barycenter({{x}, iso_weights(1), d, 0.2 * d.max(), 50});
  const GraphSignal two = entropic_barycenter({{x, x}, iso_weights(2), d, 0.2 * d.max(), 50});
  CHECK((one.values() - two.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("barycenter commutes with node relabeling") {
  std::mt19937_64 rng(31);
  const Graph g = testing::random_connected_graph(12, rng);
  std::vector<Index> perm(12);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  const Graph pg = testing::permute_graph(g, perm);

  const GraphSignal a = testing::random_signal(12, rng);
  const GraphSignal b = testing::random_signal(12, rng);
  const CostMatrix d = geodesic_cost_matrix(g);
  const CostMatrix pd = geodesic_cost_matrix(pg);
  const double alpha = 0.05 * d.max();
  const GraphSignal bary = entropic_barycenter({{a, b}, iso_weights(2), d, alpha, 60});
  const GraphSignal pbary = entropic_barycenter(
      {{GraphSignal(testing::permute_vector(a.values(), perm)),
        GraphSignal(testing::permute_vector(b.values(), perm))},
       iso_weights(2), pd, alpha, 60});
  CHECK((testing::permute_vector(bary.values(), perm) - pbary.values()).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("euclidean mean is the exact weighted sum") {
  Vector a(3), b(3), w(2);
  a << 0.5, 0.5, 0.0;
  b << 0.0, 0.25, 0.75;
  w << 0.25, 0.75;
  const GraphSignal m = euclidean_mean({GraphSignal(a), GraphSignal(b)}, w);
  CHECK(m[0] == 0.125);
  CHECK(m[1] == 0.25 * 0.5 + 0.75 * 0.25);
  CHECK(m[2] == 0.5625);
}

TEST_CASE("barycenter problems are validated") {
  const CostMatrix d = geodesic_cost_matrix(build_ring_graph(6));
  const GraphSignal u = GraphSignal::uniform(6);
  Vector bad(2);
  bad << 0.6, 0.6;
  CHECK_THROWS_AS(entropic_barycenter({{u, u}, bad, d, 0.01, 10}), ValidationError);
  CHECK_THROWS_AS(entropic_barycenter({{u, u}, iso_weights(3), d, 0.01, 10}), ValidationError);
  CHECK_THROWS_AS(entropic_barycenter({{u, GraphSignal::uniform(5)}, iso_weights(2), d, 0.01, 10}),
                  ValidationError);
  CHECK_THROWS_AS(entropic_barycenter({{u, u}, iso_weights(2), d, -1.0, 10}), ValidationError);
  CHECK_THROWS_AS(entropic_barycenter({{u, u}, iso_weights(2), d, 0.01, 0}), ValidationError);
  CHECK_THROWS_AS(entropic_barycenter({{}, Vector(), d, 0.01, 10}), ValidationError);
}

TEST_CASE("high-frequency energy") {
  const Graph g = build_ring_graph(10);
  const Spectrum s = graph_spectrum(g);
  CHECK(high_frequency_energy(s, GraphSignal::uniform(10)) == doctest::Approx(0.0).epsilon(1e-12));

  const GraphSignal sharp = localize_heat_kernel(s, 0.5, 2);
  const GraphSignal smooth = localize_heat_kernel(s, 5.0, 2);
  CHECK(high_frequency_energy(s, sharp) > high_frequency_energy(s, smooth));

  // Direct sum over eigenvalues strictly above the median.
  const GraphSignal delta = GraphSignal::delta(10, 4);
  const Vector c = gft(s, delta);
  const double median = 0.5 * (s.eigvals(4) + s.eigvals(5));
  double expected = 0.0;
  for (Index k = 0; k < 10; ++k) {
    if (s.eigvals(k) > median) expected += c(k) * c(k);
  }
  CHECK(high_frequency_energy(s, delta) == doctest::Approx(expected));
}

TEST_CASE("unrolled reverse pass matches finite differences") {
  std::mt19937_64 rng(41);
  const Graph g = testing::random_connected_graph(6, rng, 0.3);
  const CostMatrix d = geodesic_cost_matrix(g);
  UnrolledBarycenter solver(-d.values() / (0.3 * d.max()), 8);

  Matrix log_atoms(3, 6);
  for (Index k = 0; k < 3; ++k) log_atoms.row(k) = testing::random_signal(6, rng).values().array().log().transpose();
  Vector w(3);
  w << 0.2, 0.5, 0.3;
  Vector probe(6);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index i = 0; i < 6; ++i) probe(i) = normal(rng);

  auto objective = [&](const Matrix& la, const Vector& lam) { return probe.dot(solver.forward(la, lam)); };
  solver.forward(log_atoms, w, true);
  Matrix grad_atoms;
  Vector grad_w;
  solver.backward(probe, grad_atoms, grad_w);

  const double h = 1e-6;
  for (Index k = 0; k < 3; ++k) {
    for (Index i = 0; i < 6; ++i) {
      Matrix up = log_atoms, down = log_atoms;
      up(k, i) += h;
      down(k, i) -= h;
      const double fd = (objective(up, w) - objective(down, w)) / (2 * h);
      CHECK(grad_atoms(k, i) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
    Vector up = w, down = w;
    up(k) += h;
    down(k) -= h;
    const double fd = (objective(log_atoms, up) - objective(log_atoms, down)) / (2 * h);
    CHECK(grad_w(k) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
  }
}
