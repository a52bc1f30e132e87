#pragma once

#include <vector>

#include "gswb/graph.hpp"
#include "gswb/spectral.hpp"
#include "gswb/types.hpp"

namespace gswb {

struct BarycenterProblem {
  std::vector<GraphSignal> atoms;
  Vector weights;  // on the simplex, one per atom
  CostMatrix cost;
  double alpha = 1e-3;
  int inner_iterations = 100;
};

struct BarycenterDiagnostics {
  double last_change = 0.0;  // max |log b| change over the final iteration
};

// Throws ValidationError when atoms, weights, cost, alpha or the iteration
// count are inconsistent.
void validate(const BarycenterProblem& p);

// Entropic Wasserstein barycenter after a fixed number of log-domain
// iterative Bregman projections. Atoms are floor-smoothed before taking logs.
GraphSignal entropic_barycenter(const BarycenterProblem& p,
                                BarycenterDiagnostics* diagnostics = nullptr);

// Elementwise sum_i weights(i) * signals[i].
GraphSignal euclidean_mean(const std::vector<GraphSignal>& signals, const Vector& weights);

// Equal weights 1/M.
Vector iso_weights(Index m);

// Energy of the graph Fourier coefficients above the median eigenvalue.
double high_frequency_energy(const Spectrum& spec, const GraphSignal& x);

}  // namespace gswb
