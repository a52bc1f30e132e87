#include "gswb/graph.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>
#include <vector>

#include "gswb/error.hpp"

namespace gswb {

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::ring: return "ring";
    case GraphKind::sensor: return "sensor";
    case GraphKind::custom: return "custom";
  }
  return "custom";
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "ring") return GraphKind::ring;
  if (name == "sensor") return GraphKind::sensor;
  if (name == "custom") return GraphKind::custom;
  throw ValidationError("unknown graph kind '" + std::string(name) + "'");
}

std::string_view to_string(EdgeLengthMode mode) {
  switch (mode) {
    case EdgeLengthMode::raw_weight: return "raw_weight";
    case EdgeLengthMode::inverse_weight: return "inverse_weight";
    case EdgeLengthMode::euclidean: return "euclidean";
  }
  return "raw_weight";
}

EdgeLengthMode parse_edge_length_mode(std::string_view name) {
  if (name == "raw_weight") return EdgeLengthMode::raw_weight;
  if (name == "inverse_weight") return EdgeLengthMode::inverse_weight;
  if (name == "euclidean") return EdgeLengthMode::euclidean;
  throw ValidationError("unknown edge length mode '" + std::string(name) + "'");
}

bool is_connected(const Matrix& weights) {
  const Index n = weights.rows();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  Index visited = 1;
  while (!stack.empty()) {
    const Index i = stack.back();
    stack.pop_back();
    for (Index j = 0; j < n; ++j) {
      if (!seen[j] && weights(i, j) > 0.0) {
        seen[j] = 1;
        ++visited;
        stack.push_back(j);
      }
    }
  }
  return visited == n;
}

void validate_graph(const Graph& g) {
  const Matrix& w = g.weights;
  const Index n = w.rows();
  if (n == 0 || w.cols() != n) {
    throw ValidationError("weight matrix must be square and non-empty");
  }
  if (!w.allFinite()) throw ValidationError("weight matrix has non-finite entries");
  for (Index i = 0; i < n; ++i) {
    if (w(i, i) != 0.0) {
      throw ValidationError("self-loop at node " + std::to_string(i));
    }
    for (Index j = 0; j < n; ++j) {
      if (w(i, j) < 0.0) {
        throw ValidationError("negative weight at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
      if (w(i, j) != w(j, i)) {
        throw ValidationError("asymmetric weight at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
    }
  }
  if (g.coords && (g.coords->rows() != n || g.coords->cols() != 2)) {
    throw ValidationError("coords must be n x 2");
  }
  if (!is_connected(w)) throw ValidationError("graph is not connected");
}

Graph build_ring_graph(Index n) {
  if (n < 3) {
    throw ValidationError("ring graph needs n >= 3, got " + std::to_string(n));
  }
  Graph g;
  g.kind = GraphKind::ring;
  g.weights = Matrix::Zero(n, n);
  Matrix coords(n, 2);
  for (Index i = 0; i < n; ++i) {
    const Index next = (i + 1) % n;
    g.weights(i, next) = 1.0;
    g.weights(next, i) = 1.0;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(n);
    coords(i, 0) = std::cos(angle);
    coords(i, 1) = std::sin(angle);
  }
  g.coords = std::move(coords);
  return g;
}

Graph build_sensor_graph(const SensorGraphParams& p) {
  if (p.n < 2) {
    throw ValidationError("sensor graph needs n >= 2, got " + std::to_string(p.n));
  }
  if (!(p.sigma > 0.0) || !(p.edge_keep_radius > 0.0)) {
    throw ValidationError("sigma and edge_keep_radius must be positive");
  }
  const double two_sigma_sq = 2.0 * p.sigma * p.sigma;
  for (int attempt = 0; attempt < kSensorRetryCap; ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(p.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(p.seed >> 32),
                      static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Matrix coords(p.n, 2);
    for (Index i = 0; i < p.n; ++i) {
      coords(i, 0) = unit(rng);
      coords(i, 1) = unit(rng);
    }
    Matrix w = Matrix::Zero(p.n, p.n);
    for (Index i = 0; i < p.n; ++i) {
      for (Index j = i + 1; j < p.n; ++j) {
        const double d = (coords.row(i) - coords.row(j)).norm();
        if (d <= p.edge_keep_radius) {
          const double wij = std::exp(-d * d / two_sigma_sq);
          w(i, j) = wij;
          w(j, i) = wij;
        }
      }
    }
    if (is_connected(w)) {
      Graph g;
      g.kind = GraphKind::sensor;
      g.weights = std::move(w);
      g.coords = std::move(coords);
      g.seed = p.seed;
      return g;
    }
  }
  std::ostringstream msg;
  msg << "sensor graph still disconnected after " << kSensorRetryCap
      << " attempts; increase edge_keep_radius (currently " << p.edge_keep_radius
      << ")";
  throw ValidationError(msg.str());
}

CostMatrix::CostMatrix(Matrix d) : d_(std::move(d)) {
  if (d_.rows() != d_.cols()) throw ValidationError("cost matrix must be square");
}

namespace {

double edge_length(const Graph& g, EdgeLengthMode mode, Index i, Index j) {
  switch (mode) {
    case EdgeLengthMode::raw_weight: return g.weights(i, j);
    case EdgeLengthMode::inverse_weight: return 1.0 / g.weights(i, j);
    case EdgeLengthMode::euclidean:
      return (g.coords->row(i) - g.coords->row(j)).norm();
  }
  return g.weights(i, j);
}

}  // namespace

CostMatrix geodesic_cost_matrix(const Graph& g, EdgeLengthMode mode) {
  const Index n = g.size();
  if (n == 0 || g.weights.cols() != n) {
    throw ValidationError("weight matrix must be square and non-empty");
  }
  if (mode == EdgeLengthMode::euclidean && !g.coords) {
    throw ValidationError("euclidean edge lengths need node coordinates");
  }

  std::vector<std::vector<std::pair<Index, double>>> adj(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && g.weights(i, j) > 0.0) adj[i].emplace_back(j, edge_length(g, mode, i, j));
    }
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  Matrix d = Matrix::Constant(n, n, inf);
  using Entry = std::pair<double, Index>;
  for (Index s = 0; s < n; ++s) {
    auto row = d.row(s);
    row(s) = 0.0;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      const auto [dist, v] = heap.top();
      heap.pop();
      if (dist > row(v)) continue;
      for (const auto& [u, len] : adj[v]) {
        const double cand = dist + len;
        if (cand < row(u)) {
          row(u) = cand;
          heap.emplace(cand, u);
        }
      }
    }
    for (Index t = 0; t < n; ++t) {
      if (row(t) == inf) {
        throw ValidationError("node " + std::to_string(t) +
                              " is unreachable from node " + std::to_string(s));
      }
    }
  }
  // Dijkstra sums edges in path order, so d(i,j) and d(j,i) can differ in
  // the last bit; average to restore exact symmetry.
  Matrix sym = 0.5 * (d + d.transpose());
  return CostMatrix(std::move(sym));
}

Eigen::MatrixXi hop_distances(const Graph& g) {
  const Index n = g.size();
  Eigen::MatrixXi hops = Eigen::MatrixXi::Constant(n, n, -1);
  for (Index s = 0; s < n; ++s) {
    std::queue<Index> frontier;
    frontier.push(s);
    hops(s, s) = 0;
    while (!frontier.empty()) {
      const Index v = frontier.front();
      frontier.pop();
      for (Index u = 0; u < n; ++u) {
        if (g.weights(v, u) > 0.0 && hops(s, u) < 0) {
          hops(s, u) = hops(s, v) + 1;
          frontier.push(u);
        }
      }
    }
  }
  return hops;
}

MetricReport validate_metric(const CostMatrix& c, double tol) {
  const Matrix& d = c.values();
  const Index n = d.rows();
  MetricReport report;
  auto pair = [](Index i, Index j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  };

  for (Index i = 0; i < n && report.non_negativity.passed; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!(d(i, j) >= 0.0)) {
        report.non_negativity = {false, {i, j}, "d" + pair(i, j) + " < 0"};
        break;
      }
    }
  }
  for (Index i = 0; i < n && report.symmetry.passed; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (d(i, j) != d(j, i)) {
        report.symmetry = {false, {i, j}, "d" + pair(i, j) + " != d" + pair(j, i)};
        break;
      }
    }
  }
  for (Index i = 0; i < n && report.identity_of_indiscernibles.passed; ++i) {
    for (Index j = 0; j < n; ++j) {
      const bool zero = d(i, j) == 0.0;
      if ((i == j) != zero) {
        report.identity_of_indiscernibles = {
            false, {i, j}, "d" + pair(i, j) + (i == j ? " != 0" : " == 0 for distinct nodes")};
        break;
      }
    }
  }
  for (Index i = 0; i < n && report.triangle_inequality.passed; ++i) {
    for (Index j = 0; j < n && report.triangle_inequality.passed; ++j) {
      for (Index k = 0; k < n; ++k) {
        if (d(i, k) > d(i, j) + d(j, k) + tol) {
          report.triangle_inequality = {
              false, {i, j, k}, "d(" + std::to_string(i) + "," + std::to_string(k) + ") > d(" +
                         std::to_string(i) + "," + std::to_string(j) + ") + d(" +
                         std::to_string(j) + "," + std::to_string(k) + ")"};
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace gswb
