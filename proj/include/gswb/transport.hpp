#pragma once

#include <string_view>

#include "gswb/graph.hpp"
#include "gswb/spectral.hpp"
#include "gswb/types.hpp"

namespace gswb {

// Coupling between two histograms: gamma(i, j) is the mass moved from i to j.
struct TransportPlan {
  Matrix gamma;

  // max(|gamma 1 - a|_inf, |gamma^T 1 - b|_inf)
  double marginal_violation(const Vector& a, const Vector& b) const;
};

enum class LogDomain { automatic, on, off };

std::string_view to_string(LogDomain mode);
LogDomain parse_log_domain(std::string_view name);

struct SinkhornConfig {
  double alpha = 1e-3;
  int max_iter = 10000;
  double marginal_tol = 1e-7;
  LogDomain log_domain = LogDomain::automatic;
  int check_every = 10;
};

struct TransportResult {
  TransportPlan plan;
  double linear_cost = 0.0;             // <D, gamma>
  double regularized_objective = 0.0;   // <D, gamma> + alpha sum gamma (log gamma - 1)
  int iterations = 0;
  bool converged = false;
  bool used_log_domain = false;
};

struct ExactTransport {
  double cost = 0.0;
  TransportPlan plan;
  int pivots = 0;
};

// Exact W1 between two histograms: the transportation LP solved with a
// network simplex. Inputs must be on the simplex and match the cost size.
ExactTransport exact_w1(const GraphSignal& a, const GraphSignal& b, const CostMatrix& c);

// Lower-level entry point for arbitrary non-negative supplies and demands
// with equal totals (not necessarily square).
ExactTransport solve_transportation(const Vector& supply, const Vector& demand,
                                    const Matrix& cost);

// Entropy-regularized transport by alternating Sinkhorn scalings. Marginals
// are floor-smoothed first so every entry is strictly positive. Hitting
// max_iter sets converged = false; it is not an error. A linear-domain
// overflow throws NumericalError suggesting the log domain.
TransportResult sinkhorn_w1(const GraphSignal& a, const GraphSignal& b, const CostMatrix& c,
                            const SinkhornConfig& cfg);

// K = exp(-c / alpha).
Matrix gibbs_kernel(const CostMatrix& c, double alpha);

// The automatic log-domain rule: alpha below 1e-2 max(c).
bool needs_log_domain(const CostMatrix& c, double alpha);

inline constexpr double kSmoothingFloor = 1e-12;

// max(v, 1e-12) followed by renormalization.
Vector floor_smooth(const Vector& v);

// sum gamma (log gamma - 1), with 0 log 0 = 0.
double negative_entropy(const Matrix& gamma);

}  // namespace gswb
