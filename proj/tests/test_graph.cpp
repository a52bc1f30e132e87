#include "doctest.h"
#include "gswb/error.hpp"
#include "gswb/graph.hpp"
#include "support.hpp"

using namespace gswb;

TEST_CASE("ring graph layout and weights") {
  const Graph g = build_ring_graph(8);
  CHECK(g.size() == 8);
  CHECK(g.kind == GraphKind::ring);
  for (Index i = 0; i < 8; ++i) {
    CHECK(g.weights(i, (i + 1) % 8) == 1.0);
    CHECK(g.weights.row(i).sum() == 2.0);
    CHECK(g.coords->row(i).norm() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(build_ring_graph(2), ValidationError);
}

TEST_CASE("sensor graph is connected and reproducible") {
  SensorGraphParams p;
  const Graph a = build_sensor_graph(p);
  const Graph b = build_sensor_graph(p);
  CHECK(a.weights == b.weights);
  CHECK(*a.coords == *b.coords);
  CHECK(is_connected(a.weights));
  CHECK(a.weights.isApprox(a.weights.transpose()));
  CHECK(a.weights.diagonal().isZero());
  CHECK(a.seed == p.seed);

  p.seed = 8;
  CHECK(build_sensor_graph(p).weights != a.weights);

  SensorGraphParams hopeless;
  hopeless.edge_keep_radius = 0.01;
  CHECK_THROWS_AS(build_sensor_graph(hopeless), ValidationError);
}

TEST_CASE("weights are cut at the radius and follow the gaussian profile") {
  SensorGraphParams p;
  p.n = 30;
  p.sigma = 0.2;
  p.edge_keep_radius = 0.4;
  const Graph g = build_sensor_graph(p);
  for (Index i = 0; i < g.size(); ++i) {
    for (Index j = i + 1; j < g.size(); ++j) {
      const double d = (g.coords->row(i) - g.coords->row(j)).norm();
      if (d <= p.edge_keep_radius) {
        CHECK(g.weights(i, j) == doctest::Approx(std::exp(-d * d / (2 * p.sigma * p.sigma))));
      } else {
        CHECK(g.weights(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("validate_graph rejects malformed weights") {
  Graph g = testing::path_graph(3);
  CHECK_NOTHROW(validate_graph(g));
  Graph asym = g;
  asym.weights(0, 1) = 2.0;
  CHECK_THROWS_AS(validate_graph(asym), ValidationError);
  Graph neg = g;
  neg.weights(0, 1) = neg.weights(1, 0) = -1.0;
  CHECK_THROWS_AS(validate_graph(neg), ValidationError);
  Graph loop = g;
  loop.weights(1, 1) = 1.0;
  CHECK_THROWS_AS(validate_graph(loop), ValidationError);
}

TEST_CASE("path graph distances") {
  const CostMatrix d = geodesic_cost_matrix(testing::path_graph(3));
  CHECK(d(0, 2) == 2.0);
  CHECK(d(2, 0) == 2.0);
  CHECK(d(1, 1) == 0.0);
}

TEST_CASE("ring distances are the shorter arc") {
  const CostMatrix d = geodesic_cost_matrix(build_ring_graph(16));
  for (Index i = 0; i < 16; ++i) {
    for (Index j = 0; j < 16; ++j) {
      const Index k = std::abs(i - j);
      CHECK(d(i, j) == static_cast<double>(std::min(k, 16 - k)));
    }
  }
}

TEST_CASE("geodesic costs agree with Floyd-Warshall in every mode") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_connected_graph(5 + trial, rng);
    for (const EdgeLengthMode mode :
         {EdgeLengthMode::raw_weight, EdgeLengthMode::inverse_weight, EdgeLengthMode::euclidean}) {
      const Matrix oracle = testing::floyd_warshall(g, mode);
      const CostMatrix d = geodesic_cost_matrix(g, mode);
      CHECK((d.values() - oracle).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("disconnected graphs name the unreachable pair") {
  Graph g;
  g.weights = Matrix::Zero(4, 4);
  g.weights(0, 1) = g.weights(1, 0) = 1.0;
  g.weights(2, 3) = g.weights(3, 2) = 1.0;
  CHECK_FALSE(is_connected(g.weights));
  try {
    geodesic_cost_matrix(g);
    FAIL("expected an exception");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("unreachable") != std::string::npos);
  }
}

TEST_CASE("euclidean mode needs coordinates") {
  CHECK_THROWS_AS(geodesic_cost_matrix(testing::path_graph(3), EdgeLengthMode::euclidean),
                  ValidationError);
}

TEST_CASE("hop distances on a ring") {
  const Eigen::MatrixXi h = hop_distances(build_ring_graph(10));
  CHECK(h(0, 5) == 5);
  CHECK(h(0, 7) == 3);
  CHECK(h(4, 4) == 0);
}

TEST_CASE("metric report on a valid geodesic matrix") {
  std::mt19937_64 rng(3);
  const MetricReport r = validate_metric(geodesic_cost_matrix(testing::random_connected_graph(12, rng)));
  CHECK(r.all_passed());
  CHECK(r.triangle_inequality.counterexample.empty());
}

TEST_CASE("metric report pinpoints each broken axiom") {
  Matrix m(3, 3);
  m << 0, 1, 5,
       1, 0, 1,
       5, 1, 0;
  MetricReport r = validate_metric(CostMatrix(m));
  CHECK_FALSE(r.triangle_inequality.passed);
  CHECK(r.triangle_inequality.witness == std::vector<Index>{0, 1, 2});
  CHECK(r.symmetry.passed);

  Matrix asym = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  asym(0, 1) = 2.0;
  r = validate_metric(CostMatrix(asym));
  CHECK_FALSE(r.symmetry.passed);
  CHECK(r.symmetry.witness.size() == 2);

  Matrix neg = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  neg(1, 2) = neg(2, 1) = -1.0;
  CHECK_FALSE(validate_metric(CostMatrix(neg)).non_negativity.passed);

  Matrix twins = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  twins(0, 1) = twins(1, 0) = 0.0;
  r = validate_metric(CostMatrix(twins));
  CHECK_FALSE(r.identity_of_indiscernibles.passed);
  CHECK_FALSE(r.identity_of_indiscernibles.counterexample.empty());
}

TEST_CASE("cost matrix must be square") {
  CHECK_THROWS_AS(CostMatrix(Matrix::Zero(2, 3)), ValidationError);
}

TEST_CASE("enum names round-trip") {
  for (const auto mode :
       {EdgeLengthMode::raw_weight, EdgeLengthMode::inverse_weight, EdgeLengthMode::euclidean}) {
    CHECK(parse_edge_length_mode(to_string(mode)) == mode);
  }
  for (const auto kind : {GraphKind::ring, GraphKind::sensor, GraphKind::custom}) {
    CHECK(parse_graph_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_edge_length_mode("manhattan"), ValidationError);
}
