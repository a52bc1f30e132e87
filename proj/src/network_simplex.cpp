// Transportation simplex (the network simplex specialised to the complete
// bipartite supply/demand graph). The basis is a spanning tree on the n row
// nodes and m column nodes with exactly n + m - 1 cells, zero-flow cells
// included, so degenerate problems stay well defined.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gswb/error.hpp"
#include "gswb/transport.hpp"

namespace gswb {

namespace {

struct Cell {
  Index row;
  Index col;
};

class TransportationSimplex {
 public:
  TransportationSimplex(const Vector& supply, const Vector& demand, const Matrix& cost)
      : n_(supply.size()),
        m_(demand.size()),
        cost_(cost),
        flow_(Matrix::Zero(supply.size(), demand.size())),
        basic_(static_cast<std::size_t>(supply.size() * demand.size()), 0),
        u_(supply.size()),
        v_(demand.size()) {
    northwest_corner(supply, demand);
  }

  int solve() {
    const double tol = 1e-12 * std::max(1.0, cost_.cwiseAbs().maxCoeff());
    const long max_pivots = 50L * (n_ + m_) * (n_ + m_) + 1000;
    const int degenerate_limit = static_cast<int>(2 * (n_ + m_));
    int degenerate_run = 0;
    int pivots = 0;
    for (;;) {
      compute_potentials();
      const bool bland = degenerate_run > degenerate_limit;
      Cell entering{-1, -1};
      if (!choose_entering(tol, bland, entering)) return pivots;
      if (++pivots > max_pivots) {
        throw NumericalError("transportation simplex exceeded its pivot budget");
      }
      const double theta = pivot(entering);
      degenerate_run = theta > 0.0 ? 0 : degenerate_run + 1;
    }
  }

  const Matrix& flow() const { return flow_; }

 private:
  bool is_basic(Index i, Index j) const {
    return basic_[static_cast<std::size_t>(i * m_ + j)] != 0;
  }
  void set_basic(Index i, Index j, bool on) {
    basic_[static_cast<std::size_t>(i * m_ + j)] = on ? 1 : 0;
  }

  void northwest_corner(const Vector& supply, const Vector& demand) {
    Vector s = supply;
    Vector d = demand;
    Index i = 0;
    Index j = 0;
    for (;;) {
      const double x = std::min(s(i), d(j));
      flow_(i, j) = x;
      s(i) -= x;
      d(j) -= x;
      set_basic(i, j, true);
      cells_.push_back({i, j});
      if (i == n_ - 1 && j == m_ - 1) break;
      if (i == n_ - 1) {
        ++j;
      } else if (j == m_ - 1) {
        ++i;
      } else if (s(i) <= d(j)) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // Node ids: rows are 0..n-1, columns n..n+m-1.
  void build_tree() {
    adj_.assign(static_cast<std::size_t>(n_ + m_), {});
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      const auto [i, j] = cells_[k];
      adj_[static_cast<std::size_t>(i)].push_back(k);
      adj_[static_cast<std::size_t>(n_ + j)].push_back(k);
    }
  }

  Index other_end(std::size_t cell, Index node) const {
    const auto [i, j] = cells_[cell];
    return node < n_ ? n_ + j : i;
  }

  void compute_potentials() {
    build_tree();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    u_.setConstant(nan);
    v_.setConstant(nan);
    std::vector<char> seen(static_cast<std::size_t>(n_ + m_), 0);
    std::vector<Index> stack{0};
    seen[0] = 1;
    u_(0) = 0.0;
    while (!stack.empty()) {
      const Index node = stack.back();
      stack.pop_back();
      for (const std::size_t k : adj_[static_cast<std::size_t>(node)]) {
        const Index next = other_end(k, node);
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = 1;
        const auto [i, j] = cells_[k];
        if (next >= n_) {
          v_(j) = cost_(i, j) - u_(i);
        } else {
          u_(i) = cost_(i, j) - v_(j);
        }
        stack.push_back(next);
      }
    }
  }

  bool choose_entering(double tol, bool bland, Cell& entering) const {
    double best = -tol;
    for (Index i = 0; i < n_; ++i) {
      for (Index j = 0; j < m_; ++j) {
        if (is_basic(i, j)) continue;
        const double reduced = cost_(i, j) - u_(i) - v_(j);
        if (reduced < best) {
          entering = {i, j};
          if (bland) return true;
          best = reduced;
        }
      }
    }
    return entering.row >= 0;
  }

  // Tree path from row node `from` to column node `to`, as cell indices in
  // order starting at `to`.
  std::vector<std::size_t> tree_path(Index from, Index to) const {
    const std::size_t total = static_cast<std::size_t>(n_ + m_);
    std::vector<std::size_t> parent_cell(total, cells_.size());
    std::vector<Index> parent(total, -1);
    std::vector<char> seen(total, 0);
    std::vector<Index> queue{from};
    seen[static_cast<std::size_t>(from)] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Index node = queue[head];
      if (node == to) break;
      for (const std::size_t k : adj_[static_cast<std::size_t>(node)]) {
        const Index next = other_end(k, node);
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = 1;
        parent[static_cast<std::size_t>(next)] = node;
        parent_cell[static_cast<std::size_t>(next)] = k;
        queue.push_back(next);
      }
    }
    if (!seen[static_cast<std::size_t>(to)]) {
      throw NumericalError("transportation simplex basis is not a spanning tree");
    }
    std::vector<std::size_t> path;
    for (Index node = to; node != from; node = parent[static_cast<std::size_t>(node)]) {
      path.push_back(parent_cell[static_cast<std::size_t>(node)]);
    }
    return path;
  }

  // Pushes the largest feasible flow around the cycle closed by `entering`
  // and swaps the blocking cell out of the basis. Returns the step size.
  double pivot(Cell entering) {
    // Path cells alternate -, +, -, ... starting next to the entering column.
    const std::vector<std::size_t> path = tree_path(entering.row, n_ + entering.col);
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = cells_.size();
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const auto [i, j] = cells_[path[p]];
      const double x = flow_(i, j);
      const bool smaller = x < theta;
      const bool tie_lower_index =
          !smaller && x == theta && leaving < cells_.size() &&
          (i * m_ + j) < (cells_[leaving].row * m_ + cells_[leaving].col);
      if (smaller || tie_lower_index) {
        theta = x;
        leaving = path[p];
      }
    }
    for (std::size_t p = 0; p < path.size(); ++p) {
      const auto [i, j] = cells_[path[p]];
      flow_(i, j) += (p % 2 == 0) ? -theta : theta;
    }
    const auto [li, lj] = cells_[leaving];
    flow_(li, lj) = 0.0;
    flow_(entering.row, entering.col) = theta;
    set_basic(li, lj, false);
    set_basic(entering.row, entering.col, true);
    cells_[leaving] = entering;
    return theta;
  }

  Index n_;
  Index m_;
  const Matrix& cost_;
  Matrix flow_;
  std::vector<char> basic_;
  std::vector<Cell> cells_;
  std::vector<std::vector<std::size_t>> adj_;
  Vector u_;
  Vector v_;
};

}  // namespace

ExactTransport solve_transportation(const Vector& supply, const Vector& demand,
                                    const Matrix& cost) {
  if (supply.size() == 0 || demand.size() == 0) {
    throw ValidationError("transportation problem needs non-empty marginals");
  }
  if (cost.rows() != supply.size() || cost.cols() != demand.size()) {
    throw ValidationError("cost matrix shape does not match the marginals");
  }
  if (!supply.allFinite() || !demand.allFinite() || !cost.allFinite()) {
    throw ValidationError("transportation inputs must be finite");
  }
  if (supply.minCoeff() < 0.0 || demand.minCoeff() < 0.0) {
    throw ValidationError("supplies and demands must be non-negative");
  }
  const double total = supply.sum();
  if (std::abs(total - demand.sum()) > 1e-9 * std::max(1.0, total)) {
    throw ValidationError("supply and demand totals differ");
  }

  TransportationSimplex simplex(supply, demand, cost);
  ExactTransport out;
  out.pivots = simplex.solve();
  out.plan.gamma = simplex.flow();
  out.cost = (cost.array() * out.plan.gamma.array()).sum();
  return out;
}

ExactTransport exact_w1(const GraphSignal& a, const GraphSignal& b, const CostMatrix& c) {
  if (a.size() != b.size() || a.size() != c.size()) {
    throw ValidationError("signal and cost dimensions do not match");
  }
  return solve_transportation(a.values(), b.values(), c.values());
}

}  // namespace gswb
