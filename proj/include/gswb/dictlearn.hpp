#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "gswb/graph.hpp"
#include "gswb/spectral.hpp"
#include "gswb/types.hpp"

namespace gswb {

// M atoms parameterized by unconstrained logits; atoms() is the row-wise
// softmax, so every atom sits exactly on the simplex.
struct Dictionary {
  Matrix atom_logits;  // M x n

  Index atom_count() const { return atom_logits.rows(); }
  Index size() const { return atom_logits.cols(); }
  Matrix atoms() const;
  Matrix log_atoms() const;
  std::vector<GraphSignal> atom_signals() const;
};

// Barycentric weights of S signals over M atoms, as row-wise softmax of
// logits.
struct WeightMatrix {
  Matrix weight_logits;  // S x M

  Matrix weights() const;
};

enum class Optimizer { plain_gradient, adaptive_moments };

std::string_view to_string(Optimizer opt);
Optimizer parse_optimizer(std::string_view name);

struct TrainConfig {
  double alpha = 0.01;
  int unroll_L = 50;
  double learning_rate = 0.01;
  int epochs = 500;
  std::uint64_t seed = 7;
  Optimizer optimizer = Optimizer::adaptive_moments;
  double init_noise = 0.01;  // std-dev of the Gaussian jitter on initial atom logits
};

void validate(const TrainConfig& cfg);

// Row-wise softmax and log-softmax.
Matrix softmax_rows(const Matrix& logits);
Matrix log_softmax_rows(const Matrix& logits);

// Entropic barycenter of d.atoms() with weights lam, alpha = cfg.alpha and
// cfg.unroll_L iterations.
GraphSignal wdl_reconstruct(const Dictionary& d, const Vector& lam, const CostMatrix& cost,
                            const TrainConfig& cfg);

// sum_i |reconstruct(d, w_i) - x_i|_2^2.
double wdl_loss(const Dictionary& d, const WeightMatrix& w, const std::vector<GraphSignal>& x,
                const CostMatrix& cost, const TrainConfig& cfg);

struct WdlGradients {
  double loss = 0.0;
  Matrix atom_logit_grads;    // M x n
  Matrix weight_logit_grads;  // S x M
};

// Loss and its exact gradient with respect to both logit blocks, by reverse
// mode through the softmax maps and the unrolled barycenter iterations.
// Non-finite entries throw NumericalError naming `epoch` and the block.
WdlGradients wdl_gradients(const Dictionary& d, const WeightMatrix& w,
                           const std::vector<GraphSignal>& x, const CostMatrix& cost,
                           const TrainConfig& cfg, int epoch = -1);

struct WdlFit {
  Dictionary dictionary;
  WeightMatrix weights;
  // Loss before each epoch's update, followed by the loss after the last one
  // (epochs + 1 entries).
  std::vector<double> loss_history;
};

using EpochCallback = std::function<void(int epoch, double loss)>;

// Full-batch training. Atom logits start at the log of M distinct training
// signals picked with cfg.seed plus Gaussian jitter; weight logits start at
// zero (uniform weights).
WdlFit wdl_fit(const std::vector<GraphSignal>& x, Index atom_count, const CostMatrix& cost,
               const TrainConfig& cfg, const EpochCallback& on_epoch = {});

struct SvdBaseline {
  Matrix components;       // M x n, top right singular vectors of the centered data
  Matrix reconstructions;  // S x n, rank-M approximation with the column means added back
  Vector singular_values;  // all of them, descending
  Vector column_means;
  double residual = 0.0;   // Frobenius norm of centered data minus its rank-M approximation
};

SvdBaseline svd_baseline(const Matrix& x, Index rank);
SvdBaseline svd_baseline(const std::vector<GraphSignal>& x, Index rank);

// Stacks signals as rows.
Matrix stack_signals(const std::vector<GraphSignal>& x);

// -sum p log p with 0 log 0 = 0.
double shannon_entropy(const Vector& p);

// 1 / sum p_i^2 for a histogram p.
double participation_ratio(const Vector& p);

// Participation ratio of the energy distribution c_i^2 / |c|^2 of a signed
// vector, i.e. |c|^4 / sum c_i^4.
double energy_participation_ratio(const Vector& c);

}  // namespace gswb
