#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gswb/types.hpp"

namespace gswb {

enum class GraphKind { ring, sensor, custom };

std::string_view to_string(GraphKind kind);
GraphKind parse_graph_kind(std::string_view name);

// Weighted undirected graph without self-loops. Every signal in the library
// lives on the vertices of one of these.
struct Graph {
  Matrix weights;                // n x n, symmetric, zero diagonal, >= 0
  std::optional<Matrix> coords;  // n x 2 planar layout, when known
  GraphKind kind = GraphKind::custom;
  std::optional<std::uint64_t> seed;

  Index size() const { return weights.rows(); }
};

// Throws ValidationError unless the weight matrix is square, finite,
// symmetric, non-negative, loop-free and the graph is connected.
void validate_graph(const Graph& g);

// Connectivity under the nonzero-weight adjacency.
bool is_connected(const Matrix& weights);

// Cycle on n >= 3 nodes with unit weights; nodes laid out on the unit circle.
Graph build_ring_graph(Index n);

struct SensorGraphParams {
  Index n = 64;
  double sigma = 0.1;
  double edge_keep_radius = 0.25;
  std::uint64_t seed = 7;
};

inline constexpr int kSensorRetryCap = 100;

// Random geometric graph on [0,1]^2 with RBF weights exp(-d^2 / (2 sigma^2))
// kept for pairs closer than edge_keep_radius. Coordinates are redrawn with a
// derived seed until the graph is connected, up to kSensorRetryCap attempts.
Graph build_sensor_graph(const SensorGraphParams& params);

// Per-edge length fed to the shortest-path search.
//   raw_weight     : the edge weight itself (default)
//   inverse_weight : 1 / weight
//   euclidean      : distance between node coordinates
enum class EdgeLengthMode { raw_weight, inverse_weight, euclidean };

std::string_view to_string(EdgeLengthMode mode);
EdgeLengthMode parse_edge_length_mode(std::string_view name);

// Ground cost between vertices. Construction only checks shape; use
// validate_metric() to check the distance axioms.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(Matrix d);

  const Matrix& values() const { return d_; }
  Index size() const { return d_.rows(); }
  double operator()(Index i, Index j) const { return d_(i, j); }
  double max() const { return d_.maxCoeff(); }
  double mean() const { return d_.mean(); }

 private:
  Matrix d_;
};

// All-pairs geodesic distances, one Dijkstra run per source. Throws
// ValidationError naming an unreachable pair on disconnected input.
CostMatrix geodesic_cost_matrix(const Graph& g,
                                EdgeLengthMode mode = EdgeLengthMode::raw_weight);

// Unweighted hop counts between all pairs (BFS on the adjacency pattern).
Eigen::MatrixXi hop_distances(const Graph& g);

struct AxiomCheck {
  bool passed = true;
  std::vector<Index> witness;  // offending pair or triple (i, j, k)
  std::string counterexample;  // empty when passed
};

struct MetricReport {
  AxiomCheck non_negativity;
  AxiomCheck symmetry;
  AxiomCheck identity_of_indiscernibles;
  AxiomCheck triangle_inequality;

  bool all_passed() const {
    return non_negativity.passed && symmetry.passed &&
           identity_of_indiscernibles.passed && triangle_inequality.passed;
  }
};

// Checks the four distance axioms over all entries and triples. Exact
// comparisons apart from `tol` of slack on the triangle inequality.
MetricReport validate_metric(const CostMatrix& c, double tol = 1e-12);

}  // namespace gswb
