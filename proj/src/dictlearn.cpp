#include "gswb/dictlearn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gswb/bregman.hpp"
#include "gswb/error.hpp"
#include "gswb/transport.hpp"

namespace gswb {

Matrix log_softmax_rows(const Matrix& logits) {
  Matrix out = logits;
  for (Index r = 0; r < out.rows(); ++r) {
    const double mx = out.row(r).maxCoeff();
    const double lse = mx + std::log((out.row(r).array() - mx).exp().sum());
    out.row(r).array() -= lse;
  }
  return out;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out = logits;
  for (Index r = 0; r < out.rows(); ++r) {
    out.row(r).array() = (out.row(r).array() - out.row(r).maxCoeff()).exp();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

Matrix Dictionary::atoms() const { return softmax_rows(atom_logits); }

Matrix Dictionary::log_atoms() const { return log_softmax_rows(atom_logits); }

std::vector<GraphSignal> Dictionary::atom_signals() const {
  const Matrix a = atoms();
  std::vector<GraphSignal> out;
  out.reserve(static_cast<std::size_t>(a.rows()));
  for (Index k = 0; k < a.rows(); ++k) out.emplace_back(a.row(k).transpose());
  return out;
}

Matrix WeightMatrix::weights() const { return softmax_rows(weight_logits); }

std::string_view to_string(Optimizer opt) {
  switch (opt) {
    case Optimizer::plain_gradient: return "plain_gradient";
    case Optimizer::adaptive_moments: return "adaptive_moments";
  }
  return "adaptive_moments";
}

Optimizer parse_optimizer(std::string_view name) {
  if (name == "plain_gradient") return Optimizer::plain_gradient;
  if (name == "adaptive_moments") return Optimizer::adaptive_moments;
  throw ValidationError("unknown optimizer '" + std::string(name) + "'");
}

void validate(const TrainConfig& cfg) {
  if (!(cfg.alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (cfg.unroll_L < 1) throw ValidationError("unroll depth must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (cfg.epochs < 1) throw ValidationError("epochs must be >= 1");
  if (!(cfg.init_noise >= 0.0)) throw ValidationError("init_noise must be >= 0");
}

namespace {

Matrix stack_checked(const std::vector<GraphSignal>& x, Index n) {
  if (x.empty()) throw ValidationError("no training signals");
  for (const GraphSignal& s : x) {
    if (s.size() != n) throw ValidationError("signal length does not match the cost matrix");
  }
  return stack_signals(x);
}

void check_shapes(const Dictionary& d, const WeightMatrix& w, Index signal_count,
                  const CostMatrix& cost) {
  if (d.size() != cost.size()) throw ValidationError("atom length does not match the cost matrix");
  if (d.atom_count() < 1) throw ValidationError("dictionary has no atoms");
  if (w.weight_logits.rows() != signal_count) {
    throw ValidationError("weight matrix needs one row per signal");
  }
  if (w.weight_logits.cols() != d.atom_count()) {
    throw ValidationError("weight matrix needs one column per atom");
  }
}

Vector softmax(const Vector& z) {
  Vector p = (z.array() - z.maxCoeff()).exp().matrix();
  return p / p.sum();
}

void check_finite(const Matrix& g, int epoch, const char* block) {
  if (!g.allFinite()) {
    throw NumericalError("non-finite gradient in " + std::string(block) +
                         (epoch >= 0 ? " at epoch " + std::to_string(epoch) : std::string()));
  }
}

}  // namespace

GraphSignal wdl_reconstruct(const Dictionary& d, const Vector& lam, const CostMatrix& cost,
                            const TrainConfig& cfg) {
  validate(cfg);
  if (d.size() != cost.size()) throw ValidationError("atom length does not match the cost matrix");
  if (lam.size() != d.atom_count()) throw ValidationError("need one weight per atom");
  if (lam.minCoeff() < 0.0 || std::abs(lam.sum() - 1.0) > 1e-12) {
    throw ValidationError("weights must lie on the simplex");
  }
  UnrolledBarycenter solver(-cost.values() / cfg.alpha, cfg.unroll_L);
  return GraphSignal(softmax(solver.forward(d.log_atoms(), lam)));
}

double wdl_loss(const Dictionary& d, const WeightMatrix& w, const std::vector<GraphSignal>& x,
                const CostMatrix& cost, const TrainConfig& cfg) {
  validate(cfg);
  const Matrix targets = stack_checked(x, cost.size());
  check_shapes(d, w, targets.rows(), cost);
  UnrolledBarycenter solver(-cost.values() / cfg.alpha, cfg.unroll_L);
  const Matrix log_atoms = d.log_atoms();
  const Matrix lambda = w.weights();
  double loss = 0.0;
  for (Index s = 0; s < targets.rows(); ++s) {
    const Vector p = softmax(solver.forward(log_atoms, lambda.row(s).transpose()));
    loss += (p - targets.row(s).transpose()).squaredNorm();
  }
  return loss;
}

WdlGradients wdl_gradients(const Dictionary& d, const WeightMatrix& w,
                           const std::vector<GraphSignal>& x, const CostMatrix& cost,
                           const TrainConfig& cfg, int epoch) {
  validate(cfg);
  const Matrix targets = stack_checked(x, cost.size());
  check_shapes(d, w, targets.rows(), cost);

  UnrolledBarycenter solver(-cost.values() / cfg.alpha, cfg.unroll_L);
  const Matrix log_atoms = d.log_atoms();
  const Matrix lambda = w.weights();
  const Index m = d.atom_count();
  const Index n = d.size();

  WdlGradients out;
  out.weight_logit_grads = Matrix::Zero(targets.rows(), m);
  Matrix grad_log_atoms = Matrix::Zero(m, n);
  Matrix grad_la_s;
  Vector grad_lambda;

  for (Index s = 0; s < targets.rows(); ++s) {
    const Vector lam = lambda.row(s).transpose();
    const Vector p = softmax(solver.forward(log_atoms, lam, /*record=*/true));
    const Vector resid = p - targets.row(s).transpose();
    out.loss += resid.squaredNorm();

    // Through the output normalization p = softmax(log b).
    const Vector grad_p = 2.0 * resid;
    const Vector grad_log_b = p.cwiseProduct(grad_p.array().matrix() -
                                             Vector::Constant(n, p.dot(grad_p)));
    solver.backward(grad_log_b, grad_la_s, grad_lambda);
    grad_log_atoms += grad_la_s;

    // Through lambda = softmax(weight logits).
    out.weight_logit_grads.row(s) =
        lam.cwiseProduct(grad_lambda - Vector::Constant(m, lam.dot(grad_lambda))).transpose();
  }

  // Through log_atoms = log_softmax(atom logits).
  const Matrix atoms = log_atoms.array().exp().matrix();
  out.atom_logit_grads = grad_log_atoms;
  for (Index k = 0; k < m; ++k) {
    out.atom_logit_grads.row(k) -= grad_log_atoms.row(k).sum() * atoms.row(k);
  }

  check_finite(out.atom_logit_grads, epoch, "atom logits");
  check_finite(out.weight_logit_grads, epoch, "weight logits");
  if (!std::isfinite(out.loss)) {
    throw NumericalError("non-finite loss" +
                         (epoch >= 0 ? " at epoch " + std::to_string(epoch) : std::string()));
  }
  return out;
}

namespace {

// Adam-style update with bias correction.
class AdaptiveMoments {
 public:
  AdaptiveMoments(Index rows, Index cols)
      : m_(Matrix::Zero(rows, cols)), v_(Matrix::Zero(rows, cols)) {}

  void step(Matrix& param, const Matrix& grad, double lr, int t) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    m_ = beta1 * m_ + (1.0 - beta1) * grad;
    v_ = beta2 * v_ + (1.0 - beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1, t);
    const double c2 = 1.0 - std::pow(beta2, t);
    param.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps);
  }

 private:
  Matrix m_;
  Matrix v_;
};

}  // namespace

WdlFit wdl_fit(const std::vector<GraphSignal>& x, Index atom_count, const CostMatrix& cost,
               const TrainConfig& cfg, const EpochCallback& on_epoch) {
  validate(cfg);
  const Index s = static_cast<Index>(x.size());
  if (atom_count < 1 || atom_count > s) {
    throw ValidationError("need 1 <= atoms <= number of signals (got " +
                          std::to_string(atom_count) + " atoms, " + std::to_string(s) +
                          " signals)");
  }
  const Matrix targets = stack_checked(x, cost.size());
  const Index n = targets.cols();

  std::mt19937_64 rng(cfg.seed);
  std::vector<Index> order(static_cast<std::size_t>(s));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::normal_distribution<double> jitter(0.0, 1.0);

  WdlFit fit;
  fit.dictionary.atom_logits.resize(atom_count, n);
  for (Index k = 0; k < atom_count; ++k) {
    const Vector seed_signal = floor_smooth(targets.row(order[static_cast<std::size_t>(k)]).transpose());
    for (Index i = 0; i < n; ++i) {
      fit.dictionary.atom_logits(k, i) = std::log(seed_signal(i)) + cfg.init_noise * jitter(rng);
    }
  }
  fit.weights.weight_logits = Matrix::Zero(s, atom_count);

  AdaptiveMoments atom_opt(atom_count, n);
  AdaptiveMoments weight_opt(s, atom_count);
  fit.loss_history.reserve(static_cast<std::size_t>(cfg.epochs) + 1);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const WdlGradients g = wdl_gradients(fit.dictionary, fit.weights, x, cost, cfg, epoch);
    fit.loss_history.push_back(g.loss);
    if (on_epoch) on_epoch(epoch, g.loss);
    if (cfg.optimizer == Optimizer::adaptive_moments) {
      atom_opt.step(fit.dictionary.atom_logits, g.atom_logit_grads, cfg.learning_rate, epoch + 1);
      weight_opt.step(fit.weights.weight_logits, g.weight_logit_grads, cfg.learning_rate,
                      epoch + 1);
    } else {
      fit.dictionary.atom_logits -= cfg.learning_rate * g.atom_logit_grads;
      fit.weights.weight_logits -= cfg.learning_rate * g.weight_logit_grads;
    }
  }
  fit.loss_history.push_back(wdl_loss(fit.dictionary, fit.weights, x, cost, cfg));
  return fit;
}

Matrix stack_signals(const std::vector<GraphSignal>& x) {
  if (x.empty()) return Matrix(0, 0);
  Matrix out(static_cast<Index>(x.size()), x.front().size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != out.cols()) throw ValidationError("signal lengths differ");
    out.row(static_cast<Index>(i)) = x[i].values().transpose();
  }
  return out;
}

double shannon_entropy(const Vector& p) {
  double h = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log(p(i));
  }
  return h;
}

double participation_ratio(const Vector& p) { return 1.0 / p.squaredNorm(); }

double energy_participation_ratio(const Vector& c) {
  const double sq = c.squaredNorm();
  return sq * sq / c.array().pow(4).sum();
}

}  // namespace gswb
