#pragma once

#include <algorithm>
#include <filesystem>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gswb/graph.hpp"
#include "gswb/spectral.hpp"

namespace gswb::testing {

// Random connected weighted graph: a random spanning tree plus extra edges
// with probability `density`, weights uniform in [0.1, 2].
inline Graph random_connected_graph(Index n, std::mt19937_64& rng, double density = 0.15) {
  std::uniform_real_distribution<double> weight(0.1, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);

  Graph g;
  g.weights = Matrix::Zero(n, n);
  for (Index k = 1; k < n; ++k) {
    std::uniform_int_distribution<Index> pick(0, k - 1);
    const Index a = order[static_cast<std::size_t>(k)];
    const Index b = order[static_cast<std::size_t>(pick(rng))];
    g.weights(a, b) = g.weights(b, a) = weight(rng);
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (g.weights(i, j) == 0.0 && coin(rng) < density) {
        g.weights(i, j) = g.weights(j, i) = weight(rng);
      }
    }
  }
  Matrix coords(n, 2);
  for (Index i = 0; i < n; ++i) coords.row(i) << coin(rng), coin(rng);
  g.coords = coords;
  return g;
}

inline double edge_length(const Graph& g, Index i, Index j, EdgeLengthMode mode) {
  switch (mode) {
    case EdgeLengthMode::raw_weight: return g.weights(i, j);
    case EdgeLengthMode::inverse_weight: return 1.0 / g.weights(i, j);
    case EdgeLengthMode::euclidean: return (g.coords->row(i) - g.coords->row(j)).norm();
  }
  return g.weights(i, j);
}

inline Matrix floyd_warshall(const Graph& g, EdgeLengthMode mode = EdgeLengthMode::raw_weight) {
  const Index n = g.size();
  const double inf = std::numeric_limits<double>::infinity();
  Matrix d = Matrix::Constant(n, n, inf);
  for (Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (i != j && g.weights(i, j) > 0.0) d(i, j) = edge_length(g, i, j, mode);
    }
  }
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    }
  }
  return d;
}

inline GraphSignal random_signal(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = u(rng);
  return GraphSignal(v / v.sum());
}

// Path graph 0 - 1 - ... - (n-1) with unit weights.
inline Graph path_graph(Index n) {
  Graph g;
  g.weights = Matrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) g.weights(i, i + 1) = g.weights(i + 1, i) = 1.0;
  return g;
}

inline Graph permute_graph(const Graph& g, const std::vector<Index>& perm) {
  const Index n = g.size();
  Graph out = g;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out.weights(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) =
          g.weights(i, j);
    }
  }
  if (g.coords) {
    for (Index i = 0; i < n; ++i) out.coords->row(perm[static_cast<std::size_t>(i)]) = g.coords->row(i);
  }
  return out;
}

inline Vector permute_vector(const Vector& x, const std::vector<Index>& perm) {
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out(perm[static_cast<std::size_t>(i)]) = x(i);
  return out;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gswb_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace gswb::testing
