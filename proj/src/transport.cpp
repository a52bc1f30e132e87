#include "gswb/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gswb/error.hpp"
#include "logsumexp.hpp"

namespace gswb {

double TransportPlan::marginal_violation(const Vector& a, const Vector& b) const {
  const double rows = (gamma.rowwise().sum() - a).cwiseAbs().maxCoeff();
  const double cols = (gamma.colwise().sum().transpose() - b).cwiseAbs().maxCoeff();
  return std::max(rows, cols);
}

std::string_view to_string(LogDomain mode) {
  switch (mode) {
    case LogDomain::automatic: return "auto";
    case LogDomain::on: return "on";
    case LogDomain::off: return "off";
  }
  return "auto";
}

LogDomain parse_log_domain(std::string_view name) {
  if (name == "auto") return LogDomain::automatic;
  if (name == "on") return LogDomain::on;
  if (name == "off") return LogDomain::off;
  throw ValidationError("log-domain must be auto, on or off (got '" + std::string(name) + "')");
}

Matrix gibbs_kernel(const CostMatrix& c, double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  // Scalar exp so that underflow gives exact zeros; the vectorized exp clamps
  // its argument and would leave ~1e-308 where the kernel should vanish.
  return (-c.values() / alpha).unaryExpr([](double x) { return std::exp(x); });
}

bool needs_log_domain(const CostMatrix& c, double alpha) {
  return alpha < 1e-2 * c.max();
}

Vector floor_smooth(const Vector& v) {
  Vector out = v.cwiseMax(kSmoothingFloor);
  out /= out.sum();
  return out;
}

double negative_entropy(const Matrix& gamma) {
  double h = 0.0;
  for (Index j = 0; j < gamma.cols(); ++j) {
    for (Index i = 0; i < gamma.rows(); ++i) {
      const double x = gamma(i, j);
      if (x > 0.0) h += x * (std::log(x) - 1.0);
    }
  }
  return h;
}

namespace {

struct ScalingOutcome {
  Matrix gamma;
  int iterations = 0;
  bool converged = false;
};

ScalingOutcome sinkhorn_linear(const Vector& a, const Vector& b, const CostMatrix& cost,
                               const SinkhornConfig& cfg) {
  const Matrix k = gibbs_kernel(cost, cfg.alpha);
  Vector u = Vector::Ones(a.size());
  Vector v = Vector::Ones(b.size());
  ScalingOutcome out;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Vector kv = k * v;
    u = a.cwiseQuotient(kv);
    const Vector ktu = k.transpose() * u;
    v = b.cwiseQuotient(ktu);
    if (!u.allFinite() || !v.allFinite()) {
      throw NumericalError(
          "Sinkhorn scalings overflowed in the linear domain; retry with log_domain "
          "(--log-domain on)");
    }
    out.iterations = it;
    if (it % cfg.check_every == 0 || it == cfg.max_iter) {
      // Columns are exact after the v update; rows carry the violation.
      const double violation = (u.cwiseProduct(k * v) - a).cwiseAbs().maxCoeff();
      if (violation <= cfg.marginal_tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.gamma = u.asDiagonal() * k * v.asDiagonal();
  return out;
}

// Iterates the log-domain scalings at a fixed alpha, starting from potentials
// f, g (in units of alpha). Returns iterations used.
int log_scaling_stage(const Vector& log_a, const Vector& log_b, const Matrix& logk, Vector& f,
                      Vector& g, int max_iter, int check_every, double tol, const Vector& a,
                      bool& converged) {
  Vector lse_rows;
  Vector lse_cols;
  converged = false;
  int it = 1;
  for (; it <= max_iter; ++it) {
    detail::row_logsumexp(logk, g, lse_rows);
    f = log_a - lse_rows;
    detail::col_logsumexp(logk, f, lse_cols);
    g = log_b - lse_cols;
    if (it % check_every == 0 || it == max_iter) {
      detail::row_logsumexp(logk, g, lse_rows);
      const Vector row_mass = (f + lse_rows).array().exp().matrix();
      if ((row_mass - a).cwiseAbs().maxCoeff() <= tol) {
        converged = true;
        return it;
      }
    }
  }
  return max_iter;
}

// Small alpha converges slowly from a cold start, so alpha is annealed down
// from the cost scale, warm-starting each stage from the previous potentials.
ScalingOutcome sinkhorn_log(const Vector& a, const Vector& b, const Matrix& cost,
                            const SinkhornConfig& cfg) {
  const Vector log_a = a.array().log().matrix();
  const Vector log_b = b.array().log().matrix();
  Vector f = Vector::Zero(a.size());
  Vector g = Vector::Zero(b.size());
  ScalingOutcome out;

  constexpr double kAnnealFactor = 0.5;
  constexpr int kStageIters = 50;
  double stage_alpha = std::max(cfg.alpha, cost.maxCoeff());
  while (stage_alpha > cfg.alpha && out.iterations < cfg.max_iter) {
    const double next = std::max(cfg.alpha, stage_alpha * kAnnealFactor);
    f *= stage_alpha / next;
    g *= stage_alpha / next;
    stage_alpha = next;
    if (stage_alpha == cfg.alpha) break;
    bool ignored = false;
    const int budget = std::min(kStageIters, cfg.max_iter - out.iterations);
    out.iterations += log_scaling_stage(log_a, log_b, -cost / stage_alpha, f, g, budget,
                                        cfg.check_every, cfg.marginal_tol, a, ignored);
  }

  const Matrix logk = -cost / cfg.alpha;
  const int remaining = std::max(1, cfg.max_iter - out.iterations);
  out.iterations += log_scaling_stage(log_a, log_b, logk, f, g, remaining, cfg.check_every,
                                      cfg.marginal_tol, a, out.converged);
  if (!f.allFinite() || !g.allFinite()) {
    throw NumericalError("log-domain Sinkhorn produced non-finite potentials");
  }
  out.gamma = ((logk.colwise() + f).rowwise() + g.transpose()).array().exp().matrix();
  return out;
}

}  // namespace

TransportResult sinkhorn_w1(const GraphSignal& a, const GraphSignal& b, const CostMatrix& c,
                            const SinkhornConfig& cfg) {
  if (a.size() != b.size() || a.size() != c.size()) {
    throw ValidationError("signal and cost dimensions do not match");
  }
  if (!(cfg.alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (!(cfg.marginal_tol > 0.0)) throw ValidationError("marginal_tol must be positive");
  if (cfg.max_iter < 1 || cfg.check_every < 1) {
    throw ValidationError("max_iter and check_every must be positive");
  }

  const Vector sa = floor_smooth(a.values());
  const Vector sb = floor_smooth(b.values());
  const bool use_log = cfg.log_domain == LogDomain::on ||
                       (cfg.log_domain == LogDomain::automatic && needs_log_domain(c, cfg.alpha));

  ScalingOutcome scaled = use_log ? sinkhorn_log(sa, sb, c.values(), cfg)
                                  : sinkhorn_linear(sa, sb, c, cfg);

  TransportResult result;
  result.plan.gamma = std::move(scaled.gamma);
  result.iterations = scaled.iterations;
  result.converged = scaled.converged;
  result.used_log_domain = use_log;
  result.linear_cost = (c.values().array() * result.plan.gamma.array()).sum();
  result.regularized_objective =
      result.linear_cost + cfg.alpha * negative_entropy(result.plan.gamma);
  return result;
}

}  // namespace gswb
