#include "doctest.h"
#include "gswb/dictlearn.hpp"
#include "gswb/error.hpp"
#include "support.hpp"

using namespace gswb;

namespace {

struct SmallProblem {
  CostMatrix cost;
  std::vector<GraphSignal> signals;
  TrainConfig cfg;
};

SmallProblem small_problem() {
  const Graph g = build_ring_graph(10);
  const Spectrum s = graph_spectrum(g);
  SmallProblem p;
  p.cost = geodesic_cost_matrix(g);
  for (Index c = 0; c < 10; c += 2) p.signals.push_back(localize_heat_kernel(s, 1.0, c));
  p.cfg.alpha = 0.5;
  p.cfg.unroll_L = 15;
  p.cfg.learning_rate = 0.05;
  p.cfg.epochs = 40;
  return p;
}

Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("softmax rows") {
  Matrix logits(2, 3);
  logits << 1, 2, 3,
            1000, 1000, 1000;
  const Matrix p = softmax_rows(logits);
  CHECK(p.row(0).sum() == doctest::Approx(1.0));
  CHECK(p(1, 0) == doctest::Approx(1.0 / 3.0));
  CHECK((log_softmax_rows(logits).array().exp().matrix() - p).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("wdl gradients agree with central differences") {
  SmallProblem p = small_problem();
  std::mt19937_64 rng(3);
  Dictionary d{random_matrix(3, 10, rng)};
  WeightMatrix w{random_matrix(5, 3, rng)};
  const WdlGradients g = wdl_gradients(d, w, p.signals, p.cost, p.cfg);
  CHECK(g.loss == doctest::Approx(wdl_loss(d, w, p.signals, p.cost, p.cfg)));

  const double h = 1e-5;
  const double floor = 1e-3 * std::max(g.atom_logit_grads.cwiseAbs().maxCoeff(),
                                       g.weight_logit_grads.cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (Index k = 0; k < 3; ++k) {
    for (Index i = 0; i < 10; i += 3) {
      Dictionary up = d, down = d;
      up.atom_logits(k, i) += h;
      down.atom_logits(k, i) -= h;
      const double fd = (wdl_loss(up, w, p.signals, p.cost, p.cfg) -
                         wdl_loss(down, w, p.signals, p.cost, p.cfg)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g.atom_logit_grads(k, i)) /
                                  std::max(std::abs(fd), floor));
    }
  }
  for (Index s = 0; s < 5; ++s) {
    for (Index k = 0; k < 3; ++k) {
      WeightMatrix up = w, down = w;
      up.weight_logits(s, k) += h;
      down.weight_logits(s, k) -= h;
      const double fd = (wdl_loss(d, up, p.signals, p.cost, p.cfg) -
                         wdl_loss(d, down, p.signals, p.cost, p.cfg)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g.weight_logit_grads(s, k)) /
                                  std::max(std::abs(fd), floor));
    }
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("training lowers the loss and is reproducible") {
  const SmallProblem p = small_problem();
  const WdlFit a = wdl_fit(p.signals, 2, p.cost, p.cfg);
  const WdlFit b = wdl_fit(p.signals, 2, p.cost, p.cfg);
  REQUIRE(a.loss_history.size() == static_cast<std::size_t>(p.cfg.epochs) + 1);
  CHECK(a.loss_history.back() < a.loss_history.front());
  CHECK(a.loss_history == b.loss_history);
  CHECK(a.dictionary.atom_logits == b.dictionary.atom_logits);
  const Matrix atoms = a.dictionary.atoms();
  CHECK((atoms.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK((a.weights.weights().rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);

  TrainConfig other = p.cfg;
  other.seed = 99;
  CHECK(wdl_fit(p.signals, 2, p.cost, other).loss_history != a.loss_history);

  TrainConfig plain = p.cfg;
  plain.optimizer = Optimizer::plain_gradient;
  const WdlFit c = wdl_fit(p.signals, 2, p.cost, plain);
  CHECK(c.loss_history.back() <= c.loss_history.front());
}

TEST_CASE("training inputs are validated") {
  const SmallProblem p = small_problem();
  CHECK_THROWS_AS(wdl_fit(p.signals, 0, p.cost, p.cfg), ValidationError);
  CHECK_THROWS_AS(wdl_fit(p.signals, 6, p.cost, p.cfg), ValidationError);
  CHECK_THROWS_AS(wdl_fit({}, 1, p.cost, p.cfg), ValidationError);
  TrainConfig bad = p.cfg;
  bad.unroll_L = 0;
  CHECK_THROWS_AS(wdl_fit(p.signals, 2, p.cost, bad), ValidationError);
  bad = p.cfg;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  CHECK_THROWS_AS(wdl_fit({GraphSignal::uniform(4)}, 1, p.cost, p.cfg), ValidationError);
  CHECK(parse_optimizer(to_string(Optimizer::plain_gradient)) == Optimizer::plain_gradient);
}

TEST_CASE("svd residual equals the discarded spectrum") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = random_matrix(15 + trial, 9, rng);
    const SvdBaseline svd = svd_baseline(x, 3);
    const double discarded = svd.singular_values.tail(svd.singular_values.size() - 3).squaredNorm();
    CHECK(svd.residual * svd.residual == doctest::Approx(discarded).epsilon(1e-10));
    CHECK((svd.components * svd.components.transpose() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-12);
    const Matrix centered = x.rowwise() - svd.column_means.transpose();
    const Matrix approx = svd.reconstructions.rowwise() - svd.column_means.transpose();
    CHECK((centered - approx).norm() == doctest::Approx(svd.residual).epsilon(1e-10));
  }
  CHECK_THROWS_AS(svd_baseline(Matrix::Ones(3, 4), 5), ValidationError);
}

TEST_CASE("svd components are deterministic") {
  std::mt19937_64 rng(1);
  const Matrix x = random_matrix(10, 6, rng);
  CHECK(svd_baseline(x, 2).components == svd_baseline(x, 2).components);
}

TEST_CASE("localization metrics") {
  CHECK(shannon_entropy(GraphSignal::delta(8, 3).values()) == 0.0);
  CHECK(shannon_entropy(GraphSignal::uniform(8).values()) == doctest::Approx(std::log(8.0)));
  CHECK(participation_ratio(GraphSignal::delta(8, 3).values()) == 1.0);
  CHECK(participation_ratio(GraphSignal::uniform(8).values()) == doctest::Approx(8.0));
  Vector c(4);
  c << 1.0, -1.0, 1.0, -1.0;
  CHECK(energy_participation_ratio(c) == doctest::Approx(4.0));
}
