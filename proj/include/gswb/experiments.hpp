#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gswb/dictlearn.hpp"
#include "gswb/graph.hpp"

namespace gswb {

enum class ExperimentKind { translation, diffusion, wdl_vs_svd };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

using NodePair = std::pair<Index, Index>;

// Parameter bundle for one experiment run. Defaults reproduce the published
// setups; fields not used by a given kind are ignored (and still echoed).
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::translation;

  Index n = 64;
  double sensor_sigma = 0.1;
  double sensor_radius = 0.25;
  std::uint64_t seed = 7;
  EdgeLengthMode mode = EdgeLengthMode::raw_weight;

  // translation
  double tau = 5.0;
  std::optional<NodePair> ring_centers;    // default (0, n/4)
  std::optional<NodePair> sensor_centers;  // default: the pair at maximal geodesic distance

  // diffusion
  double tau1 = 1.0;
  double tau2 = 20.0;
  Index source = 0;

  double alpha = 0.001;  // 0.001 translation, 0.01 otherwise (see default_experiment)
  int barycenter_iterations = 100;

  // wdl_vs_svd
  Index atoms = 4;
  TrainConfig train;
  int render_unroll = 100;

  std::filesystem::path out_dir = "run";
};

ExperimentSpec default_experiment(ExperimentKind kind);

// Range checks against the owning modules' preconditions.
void validate(const ExperimentSpec& spec);

// Config echo; from_json(to_json(spec)) reproduces the run bit for bit.
std::string experiment_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(std::string_view text);

struct ExperimentOutcome {
  std::filesystem::path dir;
  std::string summary_json;  // also written to dir/summary.json
};

// Each writes into spec.out_dir: config.json, summary.json, graphs/,
// signals/ and figures/ (plus gft/ or wdl/ and svd/ where relevant).
ExperimentOutcome run_translation_experiment(const ExperimentSpec& spec);
ExperimentOutcome run_diffusion_experiment(const ExperimentSpec& spec);
ExperimentOutcome run_wdl_experiment(const ExperimentSpec& spec);
ExperimentOutcome run_experiment(const ExperimentSpec& spec);

// Standalone writers shared by the experiment and the wdl/svd subcommands.
// wdl: atoms/atom_NNN.json, weights.csv (S x M), loss_history.csv.
// svd: components.csv (M x n), reconstructions.csv (S x n), singular_values.csv.
void write_wdl_outputs(const std::filesystem::path& dir, const WdlFit& fit);
void write_svd_outputs(const std::filesystem::path& dir, const SvdBaseline& svd);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> lines;  // one per check, prefixed PASS or FAIL
};

// Recomputes summary values from the persisted artifacts of a run directory
// and compares them with summary.json.
VerifyReport verify_run(const std::filesystem::path& dir);

// Graph helpers shared by the experiments and the acceptance suite.

// Nodes v with d(a, v) + d(v, b) == d(a, b) up to rel_tol * max(d).
std::vector<Index> shortest_path_nodes(const CostMatrix& d, Index a, Index b,
                                       double rel_tol = 1e-9);

// Vertex on a shortest a-b path that best balances d(a, v) and d(v, b);
// lowest index on ties.
Index geodesic_midpoint(const CostMatrix& d, Index a, Index b);

// Nodes whose value is strictly larger than at every neighbour.
std::vector<Index> local_maxima(const Graph& g, const Vector& x);

// The pair (i < j) with the largest cost; lowest indices on ties.
NodePair farthest_pair(const CostMatrix& d);

// argmin_v sum_k w_k * W1(signals[k], delta_v) by exhaustive search with the
// exact solver. Returns (vertex, objective at every vertex).
std::pair<Index, Vector> vertex_barycenter_oracle(const std::vector<GraphSignal>& signals,
                                                  const Vector& weights, const CostMatrix& d);

}  // namespace gswb
