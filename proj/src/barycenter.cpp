#include "gswb/barycenter.hpp"

#include <algorithm>
#include <cmath>

#include "gswb/bregman.hpp"
#include "gswb/error.hpp"
#include "gswb/transport.hpp"

namespace gswb {

namespace {

void check_weights(const Vector& weights, std::size_t count) {
  if (weights.size() != static_cast<Index>(count)) {
    throw ValidationError("need exactly one weight per signal");
  }
  if (!weights.allFinite() || weights.minCoeff() < 0.0) {
    throw ValidationError("weights must be finite and non-negative");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-12) {
    throw ValidationError("weights must sum to one");
  }
}

}  // namespace

void validate(const BarycenterProblem& p) {
  if (p.atoms.empty()) throw ValidationError("barycenter needs at least one atom");
  check_weights(p.weights, p.atoms.size());
  const Index n = p.cost.size();
  for (const GraphSignal& a : p.atoms) {
    if (a.size() != n) throw ValidationError("atom length does not match the cost matrix");
  }
  if (!(p.alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (p.inner_iterations < 1) throw ValidationError("inner_iterations must be >= 1");
}

GraphSignal entropic_barycenter(const BarycenterProblem& p, BarycenterDiagnostics* diagnostics) {
  validate(p);
  const Index n = p.cost.size();
  const Index m = static_cast<Index>(p.atoms.size());
  Matrix log_atoms(m, n);
  for (Index k = 0; k < m; ++k) {
    log_atoms.row(k) = floor_smooth(p.atoms[static_cast<std::size_t>(k)].values())
                           .array()
                           .log()
                           .matrix()
                           .transpose();
  }
  UnrolledBarycenter solver(-p.cost.values() / p.alpha, p.inner_iterations);
  const Vector log_b = solver.forward(log_atoms, p.weights);
  if (diagnostics) diagnostics->last_change = solver.last_change();

  Vector b = (log_b.array() - log_b.maxCoeff()).exp().matrix();
  b /= b.sum();
  return GraphSignal(std::move(b));
}

GraphSignal euclidean_mean(const std::vector<GraphSignal>& signals, const Vector& weights) {
  if (signals.empty()) throw ValidationError("mean of an empty set");
  check_weights(weights, signals.size());
  const Index n = signals.front().size();
  Vector out = Vector::Zero(n);
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (signals[i].size() != n) throw ValidationError("signal lengths differ");
    out += weights(static_cast<Index>(i)) * signals[i].values();
  }
  // Convexity keeps the sum at one up to roundoff; no renormalization so
  // degenerate weights reproduce their input bit for bit.
  return GraphSignal(std::move(out));
}

Vector iso_weights(Index m) {
  if (m < 1) throw ValidationError("need at least one weight");
  return Vector::Constant(m, 1.0 / static_cast<double>(m));
}

double high_frequency_energy(const Spectrum& spec, const GraphSignal& x) {
  const Vector coeffs = gft(spec, x);
  std::vector<double> sorted(spec.eigvals.data(), spec.eigvals.data() + spec.size());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  double energy = 0.0;
  for (Index l = 0; l < spec.size(); ++l) {
    if (spec.eigvals(l) > median) energy += coeffs(l) * coeffs(l);
  }
  return energy;
}

}  // namespace gswb
