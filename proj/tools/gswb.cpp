#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gswb/barycenter.hpp"
#include "gswb/dictlearn.hpp"
#include "gswb/error.hpp"
#include "gswb/experiments.hpp"
#include "gswb/graph.hpp"
#include "gswb/io.hpp"
#include "gswb/render.hpp"
#include "gswb/spectral.hpp"
#include "gswb/transport.hpp"

namespace fs = std::filesystem;
using namespace gswb;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string log_level = "info";
};

// Writes to --out, or stdout when it is not given.
void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    io::write_text(g.out, text);
    spdlog::info("wrote {}", g.out);
  }
}

fs::path require_out(const Globals& g, const char* what) {
  if (g.out.empty()) throw ValidationError(std::string(what) + " needs --out");
  return g.out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

std::vector<GraphSignal> read_signals(const std::vector<std::string>& paths) {
  std::vector<GraphSignal> out;
  for (const auto& p : paths) out.push_back(io::read_signal(p).signal);
  return out;
}

Vector weights_or_iso(const std::vector<double>& w, std::size_t count) {
  if (w.empty()) return iso_weights(static_cast<Index>(count));
  if (w.size() != count) throw ValidationError("need one weight per signal");
  return to_vector(w);
}

std::vector<GraphSignal> signals_of(const std::vector<io::SignalFile>& files) {
  std::vector<GraphSignal> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(f.signal);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph signal processing with Wasserstein barycenters"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (sensor graphs, dictionary learning)");
  app.add_option("-o,--out", g.out, "Output file or directory");
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));

  std::function<void()> action;

  // graph ring / sensor
  auto* graph_cmd = app.add_subcommand("graph", "Build a graph");
  graph_cmd->require_subcommand(1);
  Index ring_n = 64;
  auto* ring_cmd = graph_cmd->add_subcommand("ring", "Cycle graph with unit weights");
  ring_cmd->add_option("--n", ring_n, "Number of nodes")->capture_default_str();
  ring_cmd->callback([&] { action = [&] { emit(g, io::graph_to_json(build_ring_graph(ring_n))); }; });

  SensorGraphParams sensor;
  auto* sensor_cmd = graph_cmd->add_subcommand("sensor", "Random geometric graph in the unit square");
  sensor_cmd->add_option("--n", sensor.n, "Number of nodes")->capture_default_str();
  sensor_cmd->add_option("--sigma", sensor.sigma, "Gaussian weight bandwidth")->capture_default_str();
  sensor_cmd->add_option("--radius", sensor.edge_keep_radius, "Edge cutoff distance")
      ->capture_default_str();
  sensor_cmd->callback([&] {
    action = [&] {
      if (g.seed) sensor.seed = *g.seed;
      emit(g, io::graph_to_json(build_sensor_graph(sensor)));
    };
  });

  // cost
  std::string graph_path;
  std::string mode_name = "raw_weight";
  auto* cost_cmd = app.add_subcommand("cost", "Geodesic cost matrix as CSV");
  cost_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  cost_cmd->add_option("--mode", mode_name, "raw_weight|inverse_weight|euclidean")
      ->capture_default_str();
  cost_cmd->callback([&] {
    action = [&] {
      const Graph graph = io::read_graph(graph_path);
      const CostMatrix c = geodesic_cost_matrix(graph, parse_edge_length_mode(mode_name));
      const MetricReport report = validate_metric(c);
      if (!report.all_passed()) spdlog::warn("cost matrix fails a metric axiom check");
      emit(g, io::matrix_to_csv(c.values()));
    };
  });

  // signal heat / diffusion
  auto* signal_cmd = app.add_subcommand("signal", "Heat-kernel signals");
  signal_cmd->require_subcommand(1);
  double tau = 5.0;
  Index center = 0;
  auto* heat_cmd = signal_cmd->add_subcommand("heat", "Heat kernel localized at a node");
  heat_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  heat_cmd->add_option("--tau", tau, "Diffusion time")->capture_default_str();
  heat_cmd->add_option("--center", center, "Center node")->capture_default_str();
  heat_cmd->callback([&] {
    action = [&] {
      const Spectrum s = graph_spectrum(io::read_graph(graph_path));
      emit(g, io::signal_to_json(localize_heat_kernel(s, tau, center),
                                 {io::SignalKind::heat, tau, center}));
    };
  });
  auto* diff_cmd = signal_cmd->add_subcommand("diffusion", "Diffusion snapshot from a source node");
  diff_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  diff_cmd->add_option("--tau", tau, "Diffusion time")->capture_default_str();
  diff_cmd->add_option("--source", center, "Source node")->capture_default_str();
  diff_cmd->callback([&] {
    action = [&] {
      const Spectrum s = graph_spectrum(io::read_graph(graph_path));
      emit(g, io::signal_to_json(diffusion_snapshot(s, tau, center),
                                 {io::SignalKind::diffusion, tau, center}));
    };
  });

  // gft
  std::string signal_path;
  auto* gft_cmd = app.add_subcommand("gft", "Graph Fourier transform as (eigenvalue, coefficient) CSV");
  gft_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  gft_cmd->add_option("--signal", signal_path, "Signal JSON")->required();
  gft_cmd->callback([&] {
    action = [&] {
      const Spectrum s = graph_spectrum(io::read_graph(graph_path));
      const GraphSignal x = io::read_signal(signal_path).signal;
      if (x.size() != s.eigvals.size()) throw ValidationError("signal length does not match the graph");
      Matrix rows(x.size(), 2);
      rows.col(0) = s.eigvals;
      rows.col(1) = gft(s, x);
      emit(g, io::matrix_to_csv(rows));
    };
  });

  // dist
  std::string a_path;
  std::string b_path;
  std::string plan_path;
  bool exact = false;
  std::string log_domain = "auto";
  SinkhornConfig sinkhorn;
  auto* dist_cmd = app.add_subcommand("dist", "W1 distance between two signals");
  dist_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  dist_cmd->add_option("--mode", mode_name, "Edge length mode")->capture_default_str();
  dist_cmd->add_option("--a", a_path, "First signal")->required();
  dist_cmd->add_option("--b", b_path, "Second signal")->required();
  dist_cmd->add_option("--alpha", sinkhorn.alpha, "Entropic regularization")->capture_default_str();
  dist_cmd->add_option("--max-iter", sinkhorn.max_iter, "Sinkhorn iteration cap")->capture_default_str();
  dist_cmd->add_option("--tol", sinkhorn.marginal_tol, "Marginal tolerance")->capture_default_str();
  dist_cmd->add_flag("--exact", exact, "Solve the unregularized LP");
  dist_cmd->add_option("--log-domain", log_domain, "auto|on|off")->capture_default_str();
  dist_cmd->add_option("--plan", plan_path, "Also write the transport plan as CSV");
  dist_cmd->callback([&] {
    action = [&] {
      const CostMatrix c =
          geodesic_cost_matrix(io::read_graph(graph_path), parse_edge_length_mode(mode_name));
      const GraphSignal a = io::read_signal(a_path).signal;
      const GraphSignal b = io::read_signal(b_path).signal;
      if (exact) {
        const ExactTransport r = exact_w1(a, b, c);
        emit(g, io::transport_result_to_json(r.cost, std::nullopt, r.pivots, true));
        if (!plan_path.empty()) io::write_matrix_csv(plan_path, r.plan.gamma);
        return;
      }
      sinkhorn.log_domain = parse_log_domain(log_domain);
      const TransportResult r = sinkhorn_w1(a, b, c, sinkhorn);
      if (!r.converged) spdlog::warn("Sinkhorn stopped at the iteration cap without converging");
      emit(g, io::transport_result_to_json(r.linear_cost, r.regularized_objective, r.iterations,
                                           r.converged));
      if (!plan_path.empty()) io::write_matrix_csv(plan_path, r.plan.gamma);
    };
  });

  // barycenter / mean
  std::vector<std::string> signal_paths;
  std::vector<double> weights;
  double alpha = 1e-3;
  int iters = 100;
  auto* bary_cmd = app.add_subcommand("barycenter", "Entropic W1 barycenter of signals");
  bary_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  bary_cmd->add_option("--mode", mode_name, "Edge length mode")->capture_default_str();
  bary_cmd->add_option("--signals", signal_paths, "Signal JSON files")->required();
  bary_cmd->add_option("--weights", weights, "Barycentric weights (default equal)");
  bary_cmd->add_option("--alpha", alpha, "Entropic regularization")->capture_default_str();
  bary_cmd->add_option("--iters", iters, "Bregman iterations")->capture_default_str();
  bary_cmd->callback([&] {
    action = [&] {
      BarycenterProblem p;
      p.atoms = read_signals(signal_paths);
      p.weights = weights_or_iso(weights, p.atoms.size());
      p.cost = geodesic_cost_matrix(io::read_graph(graph_path), parse_edge_length_mode(mode_name));
      p.alpha = alpha;
      p.inner_iterations = iters;
      BarycenterDiagnostics diag;
      const GraphSignal b = entropic_barycenter(p, &diag);
      spdlog::debug("final iteration change {:.3g}", diag.last_change);
      emit(g, io::signal_to_json(b));
    };
  });
  auto* mean_cmd = app.add_subcommand("mean", "Weighted Euclidean mean of signals");
  mean_cmd->add_option("--signals", signal_paths, "Signal JSON files")->required();
  mean_cmd->add_option("--weights", weights, "Weights (default equal)");
  mean_cmd->callback([&] {
    action = [&] {
      const auto signals = read_signals(signal_paths);
      emit(g, io::signal_to_json(euclidean_mean(signals, weights_or_iso(weights, signals.size()))));
    };
  });

  // hfenergy
  auto* hf_cmd = app.add_subcommand("hfenergy", "Energy above the median graph frequency");
  hf_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  hf_cmd->add_option("--signal", signal_path, "Signal JSON")->required();
  hf_cmd->callback([&] {
    action = [&] {
      const Spectrum s = graph_spectrum(io::read_graph(graph_path));
      emit(g, io::format_double(high_frequency_energy(s, io::read_signal(signal_path).signal)) + "\n");
    };
  });

  // wdl / svd
  std::string signal_dir;
  Index atoms = 4;
  TrainConfig train;
  std::string optimizer = "adaptive_moments";
  auto* wdl_cmd = app.add_subcommand("wdl", "Wasserstein dictionary learning");
  wdl_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  wdl_cmd->add_option("--mode", mode_name, "Edge length mode")->capture_default_str();
  wdl_cmd->add_option("--signals", signal_dir, "Directory of training signal JSON files")->required();
  wdl_cmd->add_option("--atoms", atoms, "Dictionary size")->capture_default_str();
  wdl_cmd->add_option("--alpha", train.alpha, "Entropic regularization")->capture_default_str();
  wdl_cmd->add_option("--unroll", train.unroll_L, "Unrolled Bregman iterations")->capture_default_str();
  wdl_cmd->add_option("--lr", train.learning_rate, "Learning rate")->capture_default_str();
  wdl_cmd->add_option("--epochs", train.epochs, "Full-batch epochs")->capture_default_str();
  wdl_cmd->add_option("--optimizer", optimizer, "adaptive_moments|plain_gradient")
      ->capture_default_str();
  wdl_cmd->callback([&] {
    action = [&] {
      const fs::path dir = require_out(g, "wdl");
      if (g.seed) train.seed = *g.seed;
      train.optimizer = parse_optimizer(optimizer);
      const CostMatrix c =
          geodesic_cost_matrix(io::read_graph(graph_path), parse_edge_length_mode(mode_name));
      const auto signals = signals_of(io::read_signal_dir(signal_dir));
      const WdlFit fit = wdl_fit(signals, atoms, c, train, [](int epoch, double loss) {
        if (epoch % 50 == 0) spdlog::info("epoch {} loss {:.6g}", epoch, loss);
      });
      write_wdl_outputs(dir, fit);
      ExperimentSpec echo = default_experiment(ExperimentKind::wdl_vs_svd);
      echo.atoms = atoms;
      echo.train = train;
      echo.mode = parse_edge_length_mode(mode_name);
      echo.out_dir = dir;
      io::write_text(dir / "config.json", experiment_to_json(echo));
      spdlog::info("loss {:.6g} -> {:.6g}", fit.loss_history.front(), fit.loss_history.back());
    };
  });
  Index rank = 4;
  auto* svd_cmd = app.add_subcommand("svd", "Truncated SVD baseline");
  svd_cmd->add_option("--signals", signal_dir, "Directory of signal JSON files")->required();
  svd_cmd->add_option("--rank", rank, "Number of components")->capture_default_str();
  svd_cmd->callback([&] {
    action = [&] {
      const fs::path dir = require_out(g, "svd");
      write_svd_outputs(dir, svd_baseline(signals_of(io::read_signal_dir(signal_dir)), rank));
    };
  });

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "Run a full experiment into a run directory");
  std::string exp_kind;
  std::string config_path;
  std::optional<Index> exp_n;
  std::optional<double> exp_sigma, exp_radius, exp_tau, exp_tau1, exp_tau2, exp_alpha;
  std::optional<int> exp_iters, exp_epochs;
  exp_cmd->add_option("kind", exp_kind, "translation|diffusion|wdl")
      ->required()
      ->check(CLI::IsMember({"translation", "diffusion", "wdl"}));
  exp_cmd->add_option("--config", config_path, "Experiment config JSON (e.g. a previous config.json)");
  exp_cmd->add_option("--n", exp_n, "Number of nodes");
  exp_cmd->add_option("--sigma", exp_sigma, "Sensor graph bandwidth");
  exp_cmd->add_option("--radius", exp_radius, "Sensor graph cutoff");
  exp_cmd->add_option("--tau", exp_tau, "Heat kernel time");
  exp_cmd->add_option("--tau1", exp_tau1, "Early diffusion time");
  exp_cmd->add_option("--tau2", exp_tau2, "Late diffusion time");
  exp_cmd->add_option("--alpha", exp_alpha, "Entropic regularization");
  exp_cmd->add_option("--iters", exp_iters, "Barycenter iterations");
  exp_cmd->add_option("--epochs", exp_epochs, "WDL epochs");
  std::optional<std::string> exp_mode;
  std::optional<Index> exp_source;
  exp_cmd->add_option("--source", exp_source, "Diffusion source node");
  exp_cmd->add_option("--mode", exp_mode, "Edge length mode");
  exp_cmd->callback([&] {
    action = [&] {
      ExperimentSpec spec = config_path.empty()
                                ? default_experiment(parse_experiment_kind(exp_kind))
                                : experiment_from_json(io::read_text(config_path));
      if (spec.kind != parse_experiment_kind(exp_kind)) {
        throw ValidationError("config is for a different experiment kind");
      }
      if (exp_n) spec.n = *exp_n;
      if (exp_sigma) spec.sensor_sigma = *exp_sigma;
      if (exp_radius) spec.sensor_radius = *exp_radius;
      if (exp_tau) spec.tau = *exp_tau;
      if (exp_tau1) spec.tau1 = *exp_tau1;
      if (exp_tau2) spec.tau2 = *exp_tau2;
      if (exp_iters) spec.barycenter_iterations = *exp_iters;
      if (exp_epochs) spec.train.epochs = *exp_epochs;
      if (exp_source) spec.source = *exp_source;
      if (exp_mode) spec.mode = parse_edge_length_mode(*exp_mode);
      if (exp_alpha) {
        spec.alpha = *exp_alpha;
        spec.train.alpha = *exp_alpha;
      }
      if (g.seed) {
        spec.seed = *g.seed;
        spec.train.seed = *g.seed;
      }
      if (!g.out.empty()) spec.out_dir = g.out;
      const ExperimentOutcome out = run_experiment(spec);
      std::cout << out.summary_json;
      spdlog::info("run written to {}", out.dir.string());
    };
  });

  // render
  std::optional<Index> highlight;
  std::string title;
  auto* render_cmd = app.add_subcommand("render", "Render a signal on a graph as SVG");
  render_cmd->add_option("--graph", graph_path, "Graph JSON with coordinates")->required();
  render_cmd->add_option("--signal", signal_path, "Signal JSON")->required();
  render_cmd->add_option("--title", title, "Figure title");
  render_cmd->add_option("--highlight", highlight, "Node to ring (default: argmax)");
  render_cmd->callback([&] {
    action = [&] {
      RenderSpec spec;
      spec.title = title;
      spec.highlight = highlight;
      emit(g, render_svg(io::read_graph(graph_path), io::read_signal(signal_path).signal, spec));
    };
  });

  // verify
  std::string run_dir;
  auto* verify_cmd = app.add_subcommand("verify", "Recompute a run's summary from its artifacts");
  verify_cmd->add_option("run", run_dir, "Run directory")->required();
  bool verify_failed = false;
  verify_cmd->callback([&] {
    action = [&] {
      const VerifyReport report = verify_run(run_dir);
      for (const auto& line : report.lines) std::cout << line << "\n";
      verify_failed = !report.ok;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  spdlog::set_default_logger(spdlog::stderr_color_st("gswb"));
  spdlog::set_level(spdlog::level::from_str(g.log_level));
  spdlog::set_pattern("[%l] %v");

  try {
    if (action) action();
    return verify_failed ? 1 : 0;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return 3;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
}
