#include "gswb/experiments.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gswb/barycenter.hpp"
#include "gswb/error.hpp"
#include "gswb/io.hpp"
#include "gswb/render.hpp"
#include "gswb/spectral.hpp"
#include "gswb/transport.hpp"
#include "json.hpp"

namespace gswb {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::translation: return "translation";
    case ExperimentKind::diffusion: return "diffusion";
    case ExperimentKind::wdl_vs_svd: return "wdl";
  }
  return "translation";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  if (name == "translation") return ExperimentKind::translation;
  if (name == "diffusion") return ExperimentKind::diffusion;
  if (name == "wdl" || name == "wdl_vs_svd") return ExperimentKind::wdl_vs_svd;
  throw ValidationError("unknown experiment '" + std::string(name) + "'");
}

ExperimentSpec default_experiment(ExperimentKind kind) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.alpha = kind == ExperimentKind::translation ? 0.001 : 0.01;
  spec.train.alpha = 0.01;
  spec.out_dir = std::string("run_") + std::string(to_string(kind));
  return spec;
}

void validate(const ExperimentSpec& spec) {
  if (spec.n < 3) throw ValidationError("experiments need n >= 3");
  if (!(spec.sensor_sigma > 0.0) || !(spec.sensor_radius > 0.0)) {
    throw ValidationError("sensor sigma and radius must be positive");
  }
  if (!(spec.alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (spec.barycenter_iterations < 1) throw ValidationError("barycenter iterations must be >= 1");
  if (!(spec.tau >= 0.0) || !(spec.tau1 >= 0.0) || !(spec.tau2 >= 0.0)) {
    throw ValidationError("diffusion times must be >= 0");
  }
  auto in_range = [&](Index v) { return v >= 0 && v < spec.n; };
  for (const auto& centers : {spec.ring_centers, spec.sensor_centers}) {
    if (centers && (!in_range(centers->first) || !in_range(centers->second))) {
      throw ValidationError("center node out of range");
    }
  }
  if (spec.kind == ExperimentKind::diffusion) {
    if (spec.tau1 > spec.tau2) throw ValidationError("diffusion experiment needs tau1 <= tau2");
    if (!in_range(spec.source)) throw ValidationError("diffusion source out of range");
  }
  if (spec.kind == ExperimentKind::wdl_vs_svd) {
    validate(spec.train);
    if (spec.atoms < 1 || spec.atoms > spec.n) throw ValidationError("atoms must lie in [1, n]");
    if (spec.render_unroll < 1) throw ValidationError("render_unroll must be >= 1");
  }
}

namespace {

json pair_to_json(const std::optional<NodePair>& p) {
  return p ? json::array({p->first, p->second}) : json(nullptr);
}

std::optional<NodePair> pair_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2) throw ValidationError("centers must be a pair of nodes");
  return NodePair{j[0].get<Index>(), j[1].get<Index>()};
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string experiment_to_json(const ExperimentSpec& spec) {
  json j;
  j["kind"] = std::string(to_string(spec.kind));
  j["n"] = spec.n;
  j["sensor_sigma"] = spec.sensor_sigma;
  j["sensor_radius"] = spec.sensor_radius;
  j["seed"] = spec.seed;
  j["edge_length_mode"] = std::string(to_string(spec.mode));
  j["tau"] = spec.tau;
  j["ring_centers"] = pair_to_json(spec.ring_centers);
  j["sensor_centers"] = pair_to_json(spec.sensor_centers);
  j["tau1"] = spec.tau1;
  j["tau2"] = spec.tau2;
  j["source"] = spec.source;
  j["alpha"] = spec.alpha;
  j["barycenter_iterations"] = spec.barycenter_iterations;
  j["atoms"] = spec.atoms;
  j["render_unroll"] = spec.render_unroll;
  json t;
  t["alpha"] = spec.train.alpha;
  t["unroll_L"] = spec.train.unroll_L;
  t["learning_rate"] = spec.train.learning_rate;
  t["epochs"] = spec.train.epochs;
  t["seed"] = spec.train.seed;
  t["optimizer"] = std::string(to_string(spec.train.optimizer));
  t["init_noise"] = spec.train.init_noise;
  j["train"] = std::move(t);
  j["out_dir"] = spec.out_dir.string();
  return j.dump(1) + "\n";
}

ExperimentSpec experiment_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed experiment config: ") + e.what());
  }
  try {
    ExperimentSpec spec = default_experiment(parse_experiment_kind(j.at("kind").get<std::string>()));
    read_opt(j, "n", spec.n);
    read_opt(j, "sensor_sigma", spec.sensor_sigma);
    read_opt(j, "sensor_radius", spec.sensor_radius);
    read_opt(j, "seed", spec.seed);
    if (j.contains("edge_length_mode")) {
      spec.mode = parse_edge_length_mode(j.at("edge_length_mode").get<std::string>());
    }
    read_opt(j, "tau", spec.tau);
    if (j.contains("ring_centers")) spec.ring_centers = pair_from_json(j.at("ring_centers"));
    if (j.contains("sensor_centers")) spec.sensor_centers = pair_from_json(j.at("sensor_centers"));
    read_opt(j, "tau1", spec.tau1);
    read_opt(j, "tau2", spec.tau2);
    read_opt(j, "source", spec.source);
    read_opt(j, "alpha", spec.alpha);
    read_opt(j, "barycenter_iterations", spec.barycenter_iterations);
    read_opt(j, "atoms", spec.atoms);
    read_opt(j, "render_unroll", spec.render_unroll);
    if (j.contains("train")) {
      const json& t = j.at("train");
      read_opt(t, "alpha", spec.train.alpha);
      read_opt(t, "unroll_L", spec.train.unroll_L);
      read_opt(t, "learning_rate", spec.train.learning_rate);
      read_opt(t, "epochs", spec.train.epochs);
      read_opt(t, "seed", spec.train.seed);
      if (t.contains("optimizer")) {
        spec.train.optimizer = parse_optimizer(t.at("optimizer").get<std::string>());
      }
      read_opt(t, "init_noise", spec.train.init_noise);
    }
    if (j.contains("out_dir")) spec.out_dir = j.at("out_dir").get<std::string>();
    return spec;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid experiment config: ") + e.what());
  }
}

std::vector<Index> shortest_path_nodes(const CostMatrix& d, Index a, Index b, double rel_tol) {
  const double tol = rel_tol * std::max(1.0, d.max());
  std::vector<Index> nodes;
  for (Index v = 0; v < d.size(); ++v) {
    if (d(a, v) + d(v, b) <= d(a, b) + tol) nodes.push_back(v);
  }
  return nodes;
}

Index geodesic_midpoint(const CostMatrix& d, Index a, Index b) {
  Index best = a;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const Index v : shortest_path_nodes(d, a, b)) {
    const double gap = std::abs(d(a, v) - d(v, b));
    if (gap < best_gap) {
      best_gap = gap;
      best = v;
    }
  }
  return best;
}

std::vector<Index> local_maxima(const Graph& g, const Vector& x) {
  std::vector<Index> out;
  for (Index i = 0; i < g.size(); ++i) {
    bool peak = true;
    for (Index j = 0; j < g.size() && peak; ++j) {
      if (j != i && g.weights(i, j) > 0.0 && x(j) >= x(i)) peak = false;
    }
    if (peak) out.push_back(i);
  }
  return out;
}

NodePair farthest_pair(const CostMatrix& d) {
  NodePair best{0, 1};
  double best_d = -1.0;
  for (Index i = 0; i < d.size(); ++i) {
    for (Index j = i + 1; j < d.size(); ++j) {
      if (d(i, j) > best_d) {
        best_d = d(i, j);
        best = {i, j};
      }
    }
  }
  return best;
}

std::pair<Index, Vector> vertex_barycenter_oracle(const std::vector<GraphSignal>& signals,
                                                  const Vector& weights, const CostMatrix& d) {
  const Index n = d.size();
  Vector objective = Vector::Zero(n);
  for (Index v = 0; v < n; ++v) {
    const GraphSignal target = GraphSignal::delta(n, v);
    for (std::size_t k = 0; k < signals.size(); ++k) {
      objective(v) += weights(static_cast<Index>(k)) * exact_w1(signals[k], target, d).cost;
    }
  }
  Index best = 0;
  objective.minCoeff(&best);
  return {best, objective};
}

namespace {

Index argmax(const Vector& x) {
  Index i = 0;
  x.maxCoeff(&i);
  return i;
}

json index_list(const std::vector<Index>& v) {
  json out = json::array();
  for (const Index i : v) out.push_back(i);
  return out;
}

struct Variant {
  std::string name;
  Graph graph;
};

std::vector<Variant> build_variants(const ExperimentSpec& spec) {
  std::vector<Variant> out;
  out.push_back({"ring", build_ring_graph(spec.n)});
  SensorGraphParams p;
  p.n = spec.n;
  p.sigma = spec.sensor_sigma;
  p.edge_keep_radius = spec.sensor_radius;
  p.seed = spec.seed;
  out.push_back({"sensor", build_sensor_graph(p)});
  return out;
}

void prepare_dir(const ExperimentSpec& spec) {
  std::error_code ec;
  for (const char* sub : {"graphs", "signals", "figures"}) {
    fs::create_directories(spec.out_dir / sub, ec);
    if (ec) throw IoError("cannot create '" + (spec.out_dir / sub).string() + "': " + ec.message());
  }
  io::write_text(spec.out_dir / "config.json", experiment_to_json(spec));
}

void render_to(const fs::path& path, const Graph& g, const GraphSignal& x, const std::string& title,
               std::optional<Index> highlight = std::nullopt) {
  RenderSpec r;
  r.title = title;
  r.highlight = highlight;
  io::write_text(path, render_svg(g, x, r));
}

ExperimentOutcome finish(const ExperimentSpec& spec, const json& summary) {
  ExperimentOutcome out;
  out.dir = spec.out_dir;
  out.summary_json = summary.dump(1) + "\n";
  io::write_text(spec.out_dir / "summary.json", out.summary_json);
  return out;
}

}  // namespace

ExperimentOutcome run_translation_experiment(const ExperimentSpec& spec) {
  validate(spec);
  prepare_dir(spec);
  const Vector weights = iso_weights(2);

  json summary;
  summary["kind"] = "translation";
  summary["n"] = spec.n;
  summary["tau"] = spec.tau;
  summary["alpha"] = spec.alpha;
  summary["barycenter_iterations"] = spec.barycenter_iterations;
  summary["weights"] = {weights(0), weights(1)};
  summary["edge_length_mode"] = std::string(to_string(spec.mode));

  for (const Variant& v : build_variants(spec)) {
    spdlog::info("translation: {} graph", v.name);
    const CostMatrix cost = geodesic_cost_matrix(v.graph, spec.mode);
    const Spectrum spectrum = graph_spectrum(v.graph);
    const NodePair centers =
        v.name == "ring" ? spec.ring_centers.value_or(NodePair{0, spec.n / 4})
                         : spec.sensor_centers.value_or(farthest_pair(cost));

    const GraphSignal first = localize_heat_kernel(spectrum, spec.tau, centers.first);
    const GraphSignal second = localize_heat_kernel(spectrum, spec.tau, centers.second);
    BarycenterProblem problem{{first, second}, weights, cost, spec.alpha, spec.barycenter_iterations};
    BarycenterDiagnostics diag;
    const GraphSignal bary = entropic_barycenter(problem, &diag);
    const GraphSignal mean = euclidean_mean({first, second}, weights);

    const Index bary_peak = argmax(bary.values());
    const Index midpoint = geodesic_midpoint(cost, centers.first, centers.second);
    const auto on_path = shortest_path_nodes(cost, centers.first, centers.second);
    const bool peak_on_path = std::find(on_path.begin(), on_path.end(), bary_peak) != on_path.end();
    const int hops = hop_distances(v.graph)(bary_peak, midpoint);
    const auto mean_peaks = local_maxima(v.graph, mean.values());
    const auto [oracle_vertex, oracle_objective] =
        vertex_barycenter_oracle({first, second}, weights, cost);

    const io::SignalMeta heat_a{io::SignalKind::heat, spec.tau, centers.first};
    const io::SignalMeta heat_b{io::SignalKind::heat, spec.tau, centers.second};
    const fs::path sig = spec.out_dir / "signals";
    const fs::path fig = spec.out_dir / "figures";
    io::write_graph(spec.out_dir / "graphs" / (v.name + ".json"), v.graph);
    io::write_signal(sig / (v.name + "_kernel_a.json"), first, heat_a);
    io::write_signal(sig / (v.name + "_kernel_b.json"), second, heat_b);
    io::write_signal(sig / (v.name + "_barycenter.json"), bary);
    io::write_signal(sig / (v.name + "_mean.json"), mean);
    render_to(fig / (v.name + "_kernel_a.svg"), v.graph, first, v.name + ": heat kernel A", centers.first);
    render_to(fig / (v.name + "_kernel_b.svg"), v.graph, second, v.name + ": heat kernel B", centers.second);
    render_to(fig / (v.name + "_barycenter.svg"), v.graph, bary, v.name + ": W1 isobarycenter");
    render_to(fig / (v.name + "_mean.svg"), v.graph, mean, v.name + ": Euclidean mean");

    json r;
    r["centers"] = {centers.first, centers.second};
    r["max_cost"] = cost.max();
    r["alpha_over_max_cost"] = spec.alpha / cost.max();
    r["barycenter_argmax"] = bary_peak;
    r["barycenter_last_change"] = diag.last_change;
    r["mean_argmax"] = argmax(mean.values());
    r["midpoint"] = midpoint;
    r["shortest_path_nodes"] = index_list(on_path);
    r["argmax_on_shortest_path"] = peak_on_path;
    r["argmax_hops_from_midpoint"] = hops;
    r["interpolates"] = peak_on_path && hops <= 2;
    r["mean_local_maxima"] = index_list(mean_peaks);
    r["mean_bimodal"] = mean_peaks.size() == 2 &&
                        ((mean_peaks[0] == centers.first && mean_peaks[1] == centers.second) ||
                         (mean_peaks[0] == centers.second && mean_peaks[1] == centers.first));
    r["oracle_vertex"] = oracle_vertex;
    r["oracle_objective"] = oracle_objective(oracle_vertex);
    r["oracle_gap_at_argmax"] = oracle_objective(bary_peak) - oracle_objective(oracle_vertex);
    summary["variants"][v.name] = std::move(r);
  }
  return finish(spec, summary);
}

ExperimentOutcome run_diffusion_experiment(const ExperimentSpec& spec) {
  validate(spec);
  prepare_dir(spec);
  std::error_code ec;
  fs::create_directories(spec.out_dir / "gft", ec);
  const Vector weights = iso_weights(2);

  json summary;
  summary["kind"] = "diffusion";
  summary["n"] = spec.n;
  summary["tau1"] = spec.tau1;
  summary["tau2"] = spec.tau2;
  summary["alpha"] = spec.alpha;
  summary["barycenter_iterations"] = spec.barycenter_iterations;
  summary["source"] = spec.source;
  summary["edge_length_mode"] = std::string(to_string(spec.mode));

  for (const Variant& v : build_variants(spec)) {
    spdlog::info("diffusion: {} graph", v.name);
    const CostMatrix cost = geodesic_cost_matrix(v.graph, spec.mode);
    const Spectrum spectrum = graph_spectrum(v.graph);
    const GraphSignal early = diffusion_snapshot(spectrum, spec.tau1, spec.source);
    const GraphSignal late = diffusion_snapshot(spectrum, spec.tau2, spec.source);
    BarycenterProblem problem{{early, late}, weights, cost, spec.alpha, spec.barycenter_iterations};
    BarycenterDiagnostics diag;
    const GraphSignal bary = entropic_barycenter(problem, &diag);
    const GraphSignal mean = euclidean_mean({early, late}, weights);

    const double e1 = high_frequency_energy(spectrum, early);
    const double e2 = high_frequency_energy(spectrum, late);
    const double eb = high_frequency_energy(spectrum, bary);
    const double em = high_frequency_energy(spectrum, mean);
    const double slack = 0.05 * e1;

    const fs::path sig = spec.out_dir / "signals";
    const fs::path fig = spec.out_dir / "figures";
    const fs::path gf = spec.out_dir / "gft";
    io::write_graph(spec.out_dir / "graphs" / (v.name + ".json"), v.graph);
    io::write_signal(sig / (v.name + "_tau1.json"), early,
                     {io::SignalKind::diffusion, spec.tau1, spec.source});
    io::write_signal(sig / (v.name + "_tau2.json"), late,
                     {io::SignalKind::diffusion, spec.tau2, spec.source});
    io::write_signal(sig / (v.name + "_barycenter.json"), bary);
    io::write_signal(sig / (v.name + "_mean.json"), mean);
    io::write_gft_csv(gf / (v.name + "_tau1.csv"), spectrum.eigvals, gft(spectrum, early));
    io::write_gft_csv(gf / (v.name + "_tau2.csv"), spectrum.eigvals, gft(spectrum, late));
    io::write_gft_csv(gf / (v.name + "_barycenter.csv"), spectrum.eigvals, gft(spectrum, bary));
    render_to(fig / (v.name + "_tau1.svg"), v.graph, early, v.name + ": diffusion at tau1", spec.source);
    render_to(fig / (v.name + "_tau2.svg"), v.graph, late, v.name + ": diffusion at tau2", spec.source);
    render_to(fig / (v.name + "_barycenter.svg"), v.graph, bary, v.name + ": W1 isobarycenter",
              spec.source);
    render_to(fig / (v.name + "_mean.svg"), v.graph, mean, v.name + ": Euclidean mean", spec.source);

    json r;
    r["max_cost"] = cost.max();
    r["alpha_over_max_cost"] = spec.alpha / cost.max();
    r["barycenter_last_change"] = diag.last_change;
    r["energy_tau1"] = e1;
    r["energy_tau2"] = e2;
    r["energy_barycenter"] = eb;
    r["energy_mean"] = em;
    r["sandwich_slack"] = slack;
    r["barycenter_in_sandwich"] = eb >= e2 - slack && eb <= e1 + slack;
    r["energy_decreases"] = e1 > e2;
    summary["variants"][v.name] = std::move(r);
  }
  return finish(spec, summary);
}

namespace {

std::string numbered(const char* stem, Index k, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03ld%s", stem, static_cast<long>(k), ext);
  return buf;
}

// Energy distribution |c| / |c|_1 of a signed component, as a signal.
GraphSignal magnitude_signal(const Vector& c) {
  return normalize_to_simplex(c.cwiseAbs());
}

}  // namespace

ExperimentOutcome run_wdl_experiment(const ExperimentSpec& spec) {
  validate(spec);
  prepare_dir(spec);

  SensorGraphParams gp;
  gp.n = spec.n;
  gp.sigma = spec.sensor_sigma;
  gp.edge_keep_radius = spec.sensor_radius;
  gp.seed = spec.seed;
  const Graph graph = build_sensor_graph(gp);
  const CostMatrix cost = geodesic_cost_matrix(graph, spec.mode);
  const Spectrum spectrum = graph_spectrum(graph);
  io::write_graph(spec.out_dir / "graphs" / "sensor.json", graph);

  std::vector<GraphSignal> training;
  training.reserve(static_cast<std::size_t>(spec.n));
  for (Index i = 0; i < spec.n; ++i) {
    training.push_back(localize_heat_kernel(spectrum, spec.tau, i));
    io::write_signal(spec.out_dir / "signals" / numbered("train", i, ".json"), training.back(),
                     {io::SignalKind::heat, spec.tau, i});
  }

  spdlog::info("wdl: {} signals, {} atoms, {} epochs", training.size(), spec.atoms,
               spec.train.epochs);
  const WdlFit fit = wdl_fit(training, spec.atoms, cost, spec.train, [](int epoch, double loss) {
    if (epoch % 50 == 0) spdlog::info("wdl: epoch {} loss {:.6g}", epoch, loss);
  });
  write_wdl_outputs(spec.out_dir / "wdl", fit);
  const SvdBaseline svd = svd_baseline(training, spec.atoms);
  write_svd_outputs(spec.out_dir / "svd", svd);

  // Reconstructions: hit rate at the training depth, renders at render_unroll.
  const Matrix lambda = fit.weights.weights();
  const Eigen::MatrixXi hops = hop_distances(graph);
  TrainConfig render_cfg = spec.train;
  render_cfg.unroll_L = spec.render_unroll;
  Matrix rendered(spec.n, spec.n);
  Index hits = 0;
  for (Index s = 0; s < spec.n; ++s) {
    const Vector lam = lambda.row(s).transpose();
    const GraphSignal recon = wdl_reconstruct(fit.dictionary, lam, cost, spec.train);
    if (hops(argmax(recon.values()), argmax(training[static_cast<std::size_t>(s)].values())) <= 2) {
      ++hits;
    }
    rendered.row(s) = wdl_reconstruct(fit.dictionary, lam, cost, render_cfg).values().transpose();
  }
  io::write_matrix_csv(spec.out_dir / "wdl" / "reconstructions.csv", rendered);

  const Matrix atoms = fit.dictionary.atoms();
  double atom_entropy = 0.0;
  double atom_pr = 0.0;
  json atom_peaks = json::array();
  for (Index k = 0; k < atoms.rows(); ++k) {
    const Vector a = atoms.row(k).transpose();
    atom_entropy += shannon_entropy(a);
    atom_pr += participation_ratio(a);
    atom_peaks.push_back(argmax(a));
    render_to(spec.out_dir / "figures" / numbered("wdl_atom", k, ".svg"), graph, GraphSignal(a),
              "WDL atom " + std::to_string(k));
  }
  double svd_pr = 0.0;
  for (Index k = 0; k < svd.components.rows(); ++k) {
    const GraphSignal mag = magnitude_signal(svd.components.row(k).transpose());
    svd_pr += participation_ratio(mag.values());
    render_to(spec.out_dir / "figures" / numbered("svd_component", k, ".svg"), graph, mag,
              "SVD component " + std::to_string(k) + " (|value|)");
  }
  double train_entropy = 0.0;
  for (const GraphSignal& x : training) train_entropy += shannon_entropy(x.values());

  const double m = static_cast<double>(atoms.rows());
  json summary;
  summary["kind"] = "wdl";
  summary["n"] = spec.n;
  summary["signals"] = training.size();
  summary["atoms"] = spec.atoms;
  summary["tau"] = spec.tau;
  summary["alpha"] = spec.train.alpha;
  summary["alpha_over_max_cost"] = spec.train.alpha / cost.max();
  summary["unroll_L"] = spec.train.unroll_L;
  summary["render_unroll"] = spec.render_unroll;
  summary["learning_rate"] = spec.train.learning_rate;
  summary["epochs"] = spec.train.epochs;
  summary["seed"] = spec.train.seed;
  summary["optimizer"] = std::string(to_string(spec.train.optimizer));
  summary["initial_loss"] = fit.loss_history.front();
  summary["final_loss"] = fit.loss_history.back();
  summary["loss_ratio"] = fit.loss_history.back() / fit.loss_history.front();
  summary["mean_atom_entropy"] = atom_entropy / m;
  summary["mean_training_entropy"] = train_entropy / static_cast<double>(training.size());
  summary["mean_atom_participation_ratio"] = atom_pr / m;
  summary["mean_svd_participation_ratio"] = svd_pr / static_cast<double>(svd.components.rows());
  summary["svd_residual"] = svd.residual;
  summary["atom_argmax"] = std::move(atom_peaks);
  summary["reconstruction_hit_rate"] =
      static_cast<double>(hits) / static_cast<double>(training.size());
  return finish(spec, summary);
}

ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::translation: return run_translation_experiment(spec);
    case ExperimentKind::diffusion: return run_diffusion_experiment(spec);
    case ExperimentKind::wdl_vs_svd: return run_wdl_experiment(spec);
  }
  throw ValidationError("unknown experiment kind");
}

void write_wdl_outputs(const fs::path& dir, const WdlFit& fit) {
  const Matrix atoms = fit.dictionary.atoms();
  for (Index k = 0; k < atoms.rows(); ++k) {
    io::write_signal(dir / "atoms" / numbered("atom", k, ".json"), GraphSignal(atoms.row(k).transpose()));
  }
  io::write_matrix_csv(dir / "weights.csv", fit.weights.weights());
  io::write_matrix_csv(dir / "loss_history.csv",
                       Eigen::Map<const Vector>(fit.loss_history.data(),
                                                static_cast<Index>(fit.loss_history.size())));
}

void write_svd_outputs(const fs::path& dir, const SvdBaseline& svd) {
  io::write_matrix_csv(dir / "components.csv", svd.components);
  io::write_matrix_csv(dir / "reconstructions.csv", svd.reconstructions);
  io::write_matrix_csv(dir / "singular_values.csv", svd.singular_values);
}

namespace {

class Checker {
 public:
  explicit Checker(VerifyReport& report) : report_(report) {}

  void close(const std::string& what, double expected, double actual, double rel = 1e-9) {
    const double tol = rel * std::max(1.0, std::abs(expected));
    record(std::abs(expected - actual) <= tol,
           what + ": summary " + io::format_double(expected) + ", recomputed " +
               io::format_double(actual));
  }
  void equal(const std::string& what, const json& expected, const json& actual) {
    record(expected == actual, what + ": summary " + expected.dump() + ", recomputed " + actual.dump());
  }

 private:
  void record(bool ok, const std::string& line) {
    report_.ok = report_.ok && ok;
    report_.lines.push_back((ok ? "PASS " : "FAIL ") + line);
  }
  VerifyReport& report_;
};

json load_json(const fs::path& p) {
  try {
    return json::parse(io::read_text(p));
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed " + p.string() + ": " + e.what());
  }
}

}  // namespace

VerifyReport verify_run(const fs::path& dir) {
  const ExperimentSpec spec = experiment_from_json(io::read_text(dir / "config.json"));
  const json summary = load_json(dir / "summary.json");
  VerifyReport report;
  Checker check(report);

  try {
    if (spec.kind == ExperimentKind::translation || spec.kind == ExperimentKind::diffusion) {
      for (const std::string name : {"ring", "sensor"}) {
        const Graph g = io::read_graph(dir / "graphs" / (name + ".json"));
        const json& r = summary.at("variants").at(name);
        const fs::path sig = dir / "signals";
        if (spec.kind == ExperimentKind::translation) {
          const CostMatrix cost = geodesic_cost_matrix(g, spec.mode);
          const GraphSignal bary = io::read_signal(sig / (name + "_barycenter.json")).signal;
          const GraphSignal mean = io::read_signal(sig / (name + "_mean.json")).signal;
          const auto a = io::read_signal(sig / (name + "_kernel_a.json"));
          const auto b = io::read_signal(sig / (name + "_kernel_b.json"));
          const NodePair centers{a.meta.center.value_or(-1), b.meta.center.value_or(-1)};
          const Index peak = argmax(bary.values());
          const Index mid = geodesic_midpoint(cost, centers.first, centers.second);
          const auto path = shortest_path_nodes(cost, centers.first, centers.second);
          check.equal(name + " centers", r.at("centers"), json{centers.first, centers.second});
          check.equal(name + " barycenter_argmax", r.at("barycenter_argmax"), json(peak));
          check.equal(name + " mean_argmax", r.at("mean_argmax"), json(argmax(mean.values())));
          check.equal(name + " midpoint", r.at("midpoint"), json(mid));
          check.equal(name + " argmax_on_shortest_path", r.at("argmax_on_shortest_path"),
                      json(std::find(path.begin(), path.end(), peak) != path.end()));
          check.equal(name + " argmax_hops_from_midpoint", r.at("argmax_hops_from_midpoint"),
                      json(hop_distances(g)(peak, mid)));
          check.equal(name + " mean_local_maxima", r.at("mean_local_maxima"),
                      index_list(local_maxima(g, mean.values())));
          check.close(name + " max_cost", r.at("max_cost").get<double>(), cost.max());
        } else {
          const Spectrum spectrum = graph_spectrum(g);
          auto energy = [&](const char* stem) {
            return high_frequency_energy(spectrum,
                                         io::read_signal(sig / (name + stem)).signal);
          };
          const double e1 = energy("_tau1.json");
          const double e2 = energy("_tau2.json");
          const double eb = energy("_barycenter.json");
          check.close(name + " energy_tau1", r.at("energy_tau1").get<double>(), e1, 1e-7);
          check.close(name + " energy_tau2", r.at("energy_tau2").get<double>(), e2, 1e-7);
          check.close(name + " energy_barycenter", r.at("energy_barycenter").get<double>(), eb, 1e-7);
          check.close(name + " energy_mean", r.at("energy_mean").get<double>(),
                      energy("_mean.json"), 1e-7);
          check.equal(name + " barycenter_in_sandwich", r.at("barycenter_in_sandwich"),
                      json(eb >= e2 - 0.05 * e1 && eb <= e1 + 0.05 * e1));
        }
      }
    } else {
      const auto training = io::read_signal_dir(dir / "signals");
      const auto atom_files = io::read_signal_dir(dir / "wdl" / "atoms");
      const Matrix history = io::read_matrix_csv(dir / "wdl" / "loss_history.csv");
      const Matrix components = io::read_matrix_csv(dir / "svd" / "components.csv");
      double h_train = 0.0;
      for (const auto& f : training) h_train += shannon_entropy(f.signal.values());
      double h_atoms = 0.0;
      double pr_atoms = 0.0;
      for (const auto& f : atom_files) {
        h_atoms += shannon_entropy(f.signal.values());
        pr_atoms += participation_ratio(f.signal.values());
      }
      double pr_svd = 0.0;
      for (Index k = 0; k < components.rows(); ++k) {
        pr_svd += participation_ratio(magnitude_signal(components.row(k).transpose()).values());
      }
      const double m = static_cast<double>(atom_files.size());
      check.close("initial_loss", summary.at("initial_loss").get<double>(), history(0, 0));
      check.close("final_loss", summary.at("final_loss").get<double>(),
                  history(history.rows() - 1, 0));
      check.close("mean_training_entropy", summary.at("mean_training_entropy").get<double>(),
                  h_train / static_cast<double>(training.size()));
      check.close("mean_atom_entropy", summary.at("mean_atom_entropy").get<double>(), h_atoms / m);
      check.close("mean_atom_participation_ratio",
                  summary.at("mean_atom_participation_ratio").get<double>(), pr_atoms / m);
      check.close("mean_svd_participation_ratio",
                  summary.at("mean_svd_participation_ratio").get<double>(),
                  pr_svd / static_cast<double>(components.rows()));
    }
  } catch (const json::exception& e) {
    throw ValidationError("summary.json is missing fields: " + std::string(e.what()));
  }
  return report;
}

}  // namespace gswb
