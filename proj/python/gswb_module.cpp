#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gswb/barycenter.hpp"
#include "gswb/dictlearn.hpp"
#include "gswb/error.hpp"
#include "gswb/experiments.hpp"
#include "gswb/graph.hpp"
#include "gswb/io.hpp"
#include "gswb/render.hpp"
#include "gswb/spectral.hpp"
#include "gswb/transport.hpp"

namespace py = pybind11;
using namespace gswb;

namespace {

std::vector<GraphSignal> rows_to_signals(const Matrix& rows) {
  std::vector<GraphSignal> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Index r = 0; r < rows.rows(); ++r) out.emplace_back(rows.row(r).transpose());
  return out;
}

CostMatrix as_cost(const Matrix& m) { return CostMatrix(m); }

}  // namespace

PYBIND11_MODULE(_gswb, m) {
  m.doc() = "Wasserstein barycenters and dictionary learning for graph signals";

  auto base = py::register_exception<Error>(m, "GswbError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init([](const Matrix& weights, std::optional<Matrix> coords) {
             Graph g;
             g.weights = weights;
             g.coords = std::move(coords);
             validate_graph(g);
             return g;
           }),
           py::arg("weights"), py::arg("coords") = py::none())
      .def_readonly("weights", &Graph::weights)
      .def_readonly("coords", &Graph::coords)
      .def_property_readonly("kind", [](const Graph& g) { return std::string(to_string(g.kind)); })
      .def_readonly("seed", &Graph::seed)
      .def_property_readonly("n", &Graph::size)
      .def("to_json", [](const Graph& g) { return io::graph_to_json(g); })
      .def_static("from_json", [](const std::string& text) { return io::graph_from_json(text); });

  m.def("ring_graph", &build_ring_graph, py::arg("n"));
  m.def(
      "sensor_graph",
      [](Index n, double sigma, double radius, std::uint64_t seed) {
        return build_sensor_graph({n, sigma, radius, seed});
      },
      py::arg("n") = 64, py::arg("sigma") = SensorGraphParams{}.sigma,
      py::arg("radius") = SensorGraphParams{}.edge_keep_radius, py::arg("seed") = 7);
  m.def(
      "cost_matrix",
      [](const Graph& g, const std::string& mode) {
        return geodesic_cost_matrix(g, parse_edge_length_mode(mode)).values();
      },
      py::arg("graph"), py::arg("mode") = "raw_weight");
  m.def(
      "metric_report",
      [](const Matrix& cost) {
        const MetricReport r = validate_metric(CostMatrix(cost));
        py::dict out;
        out["non_negativity"] = r.non_negativity.passed;
        out["symmetry"] = r.symmetry.passed;
        out["identity_of_indiscernibles"] = r.identity_of_indiscernibles.passed;
        out["triangle_inequality"] = r.triangle_inequality.passed;
        return out;
      },
      py::arg("cost"));

  m.def("laplacian", &laplacian, py::arg("graph"));
  m.def(
      "spectrum",
      [](const Graph& g) {
        const Spectrum s = graph_spectrum(g);
        return py::make_tuple(s.eigvals, s.eigvecs);
      },
      py::arg("graph"));
  m.def(
      "heat_kernel",
      [](const Graph& g, double tau, Index center) {
        return localize_heat_kernel(graph_spectrum(g), tau, center).values();
      },
      py::arg("graph"), py::arg("tau"), py::arg("center"));
  m.def(
      "gft", [](const Graph& g, const Vector& x) { return gft(graph_spectrum(g), x); },
      py::arg("graph"), py::arg("signal"));
  m.def(
      "high_frequency_energy",
      [](const Graph& g, const Vector& x) {
        return high_frequency_energy(graph_spectrum(g), GraphSignal(x));
      },
      py::arg("graph"), py::arg("signal"));

  m.def(
      "exact_w1",
      [](const Vector& a, const Vector& b, const Matrix& cost) {
        const ExactTransport r = exact_w1(GraphSignal(a), GraphSignal(b), as_cost(cost));
        return py::make_tuple(r.cost, r.plan.gamma);
      },
      py::arg("a"), py::arg("b"), py::arg("cost"));
  m.def(
      "sinkhorn_w1",
      [](const Vector& a, const Vector& b, const Matrix& cost, double alpha, int max_iter,
         double tol, const std::string& log_domain) {
        SinkhornConfig cfg;
        cfg.alpha = alpha;
        cfg.max_iter = max_iter;
        cfg.marginal_tol = tol;
        cfg.log_domain = parse_log_domain(log_domain);
        const TransportResult r = sinkhorn_w1(GraphSignal(a), GraphSignal(b), as_cost(cost), cfg);
        py::dict out;
        out["plan"] = r.plan.gamma;
        out["linear_cost"] = r.linear_cost;
        out["regularized_objective"] = r.regularized_objective;
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["used_log_domain"] = r.used_log_domain;
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("cost"), py::arg("alpha") = 1e-3,
      py::arg("max_iter") = 10000, py::arg("tol") = 1e-7, py::arg("log_domain") = "auto");

  m.def(
      "barycenter",
      [](const Matrix& signals, const Vector& weights, const Matrix& cost, double alpha,
         int iterations) {
        return entropic_barycenter(
                   {rows_to_signals(signals), weights, as_cost(cost), alpha, iterations})
            .values();
      },
      py::arg("signals"), py::arg("weights"), py::arg("cost"), py::arg("alpha") = 1e-3,
      py::arg("iterations") = 100);
  m.def(
      "euclidean_mean",
      [](const Matrix& signals, const Vector& weights) {
        return euclidean_mean(rows_to_signals(signals), weights).values();
      },
      py::arg("signals"), py::arg("weights"));

  m.def(
      "wdl_fit",
      [](const Matrix& signals, Index atoms, const Matrix& cost, double alpha, int unroll,
         double lr, int epochs, std::uint64_t seed) {
        TrainConfig cfg;
        cfg.alpha = alpha;
        cfg.unroll_L = unroll;
        cfg.learning_rate = lr;
        cfg.epochs = epochs;
        cfg.seed = seed;
        const auto x = rows_to_signals(signals);
        const CostMatrix c = as_cost(cost);
        WdlFit fit;
        {
          py::gil_scoped_release release;
          fit = wdl_fit(x, atoms, c, cfg);
        }
        py::dict out;
        out["atoms"] = fit.dictionary.atoms();
        out["weights"] = fit.weights.weights();
        out["loss_history"] = fit.loss_history;
        return out;
      },
      py::arg("signals"), py::arg("atoms"), py::arg("cost"), py::arg("alpha") = 0.01,
      py::arg("unroll") = 50, py::arg("lr") = 0.01, py::arg("epochs") = 500, py::arg("seed") = 7);
  m.def(
      "svd_baseline",
      [](const Matrix& signals, Index rank) {
        const SvdBaseline s = svd_baseline(signals, rank);
        py::dict out;
        out["components"] = s.components;
        out["reconstructions"] = s.reconstructions;
        out["singular_values"] = s.singular_values;
        out["residual"] = s.residual;
        return out;
      },
      py::arg("signals"), py::arg("rank"));
  m.def("shannon_entropy", &shannon_entropy, py::arg("p"));
  m.def("participation_ratio", &participation_ratio, py::arg("p"));

  m.def(
      "render_svg",
      [](const Graph& g, const Vector& x, const std::string& title) {
        RenderSpec spec;
        spec.title = title;
        return render_svg(g, GraphSignal(x), spec);
      },
      py::arg("graph"), py::arg("signal"), py::arg("title") = "");

  m.def(
      "default_experiment_config",
      [](const std::string& kind) {
        return experiment_to_json(default_experiment(parse_experiment_kind(kind)));
      },
      py::arg("kind"));
  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const ExperimentSpec spec = experiment_from_json(config_json);
        py::gil_scoped_release release;
        return run_experiment(spec).summary_json;
      },
      py::arg("config_json"));
  m.def(
      "verify_run",
      [](const std::filesystem::path& dir) {
        const VerifyReport r = verify_run(dir);
        return py::make_tuple(r.ok, r.lines);
      },
      py::arg("run_dir"));
}
