#include "gswb/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gswb/error.hpp"
#include "json.hpp"

namespace gswb::io {

using nlohmann::json;

namespace {

std::string_view to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::heat: return "heat";
    case SignalKind::diffusion: return "diffusion";
    case SignalKind::custom: return "custom";
  }
  return "custom";
}

SignalKind parse_signal_kind(std::string_view name) {
  if (name == "heat") return SignalKind::heat;
  if (name == "diffusion") return SignalKind::diffusion;
  if (name == "custom") return SignalKind::custom;
  throw ValidationError("unknown signal kind '" + std::string(name) + "'");
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, Index expected_cols, const char* what) {
  if (!rows.is_array()) throw ValidationError(std::string(what) + " must be an array of rows");
  Matrix m(static_cast<Index>(rows.size()), expected_cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != expected_cols) {
      throw ValidationError(std::string(what) + " row " + std::to_string(i) +
                            " has the wrong length");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = row[j].get<double>();
    }
  }
  return m;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string graph_to_json(const Graph& g) {
  json j;
  j["n"] = g.size();
  j["weights"] = matrix_to_json(g.weights);
  j["coords"] = g.coords ? matrix_to_json(*g.coords) : json(nullptr);
  j["kind"] = std::string(to_string(g.kind));
  j["seed"] = g.seed ? json(*g.seed) : json(nullptr);
  return j.dump(1) + "\n";
}

Graph graph_from_json(std::string_view text) {
  const json j = parse(text);
  try {
    Graph g;
    const Index n = j.at("n").get<Index>();
    g.weights = matrix_from_json(j.at("weights"), n, "weights");
    if (g.weights.rows() != n) throw ValidationError("weights must have n rows");
    if (j.contains("coords") && !j.at("coords").is_null()) {
      g.coords = matrix_from_json(j.at("coords"), 2, "coords");
    }
    g.kind = j.contains("kind") ? parse_graph_kind(j.at("kind").get<std::string>())
                                : GraphKind::custom;
    if (j.contains("seed") && !j.at("seed").is_null()) g.seed = j.at("seed").get<std::uint64_t>();
    validate_graph(g);
    return g;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid graph JSON: ") + e.what());
  }
}

void write_graph(const fs::path& path, const Graph& g) { write_text(path, graph_to_json(g)); }

Graph read_graph(const fs::path& path) { return graph_from_json(read_text(path)); }

std::string signal_to_json(const GraphSignal& x, const SignalMeta& meta) {
  json j;
  j["n"] = x.size();
  j["values"] = std::vector<double>(x.values().data(), x.values().data() + x.size());
  json m;
  m["kind"] = std::string(to_string(meta.kind));
  m["tau"] = meta.tau ? json(*meta.tau) : json(nullptr);
  m["center"] = meta.center ? json(*meta.center) : json(nullptr);
  j["meta"] = std::move(m);
  return j.dump(1) + "\n";
}

SignalFile signal_from_json(std::string_view text) {
  const json j = parse(text);
  try {
    const Index n = j.at("n").get<Index>();
    const auto values = j.at("values").get<std::vector<double>>();
    if (static_cast<Index>(values.size()) != n) {
      throw ValidationError("signal has " + std::to_string(values.size()) +
                            " values but n = " + std::to_string(n));
    }
    Vector v = Eigen::Map<const Vector>(values.data(), n);
    SignalMeta meta;
    if (j.contains("meta") && j.at("meta").is_object()) {
      const json& m = j.at("meta");
      if (m.contains("kind")) meta.kind = parse_signal_kind(m.at("kind").get<std::string>());
      if (m.contains("tau") && !m.at("tau").is_null()) meta.tau = m.at("tau").get<double>();
      if (m.contains("center") && !m.at("center").is_null()) {
        meta.center = m.at("center").get<Index>();
      }
    }
    return SignalFile{GraphSignal(std::move(v)), meta};
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid signal JSON: ") + e.what());
  }
}

void write_signal(const fs::path& path, const GraphSignal& x, const SignalMeta& meta) {
  write_text(path, signal_to_json(x, meta));
}

SignalFile read_signal(const fs::path& path) { return signal_from_json(read_text(path)); }

std::vector<SignalFile> read_signal_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no signal files in '" + dir.string() + "'");
  std::vector<SignalFile> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(read_signal(f));
  return out;
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Matrix matrix_from_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (field.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ValidationError("bad CSV number '" + field + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError("ragged CSV row " + std::to_string(rows.size()));
    }
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()),
           rows.empty() ? 0 : static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_matrix_csv(const fs::path& path, const Matrix& m) { write_text(path, matrix_to_csv(m)); }

Matrix read_matrix_csv(const fs::path& path) { return matrix_from_csv(read_text(path)); }

void write_cost_csv(const fs::path& path, const CostMatrix& c) { write_matrix_csv(path, c.values()); }

CostMatrix read_cost_csv(const fs::path& path) { return CostMatrix(read_matrix_csv(path)); }

void write_gft_csv(const fs::path& path, const Vector& eigvals, const Vector& coeffs) {
  if (eigvals.size() != coeffs.size()) throw ValidationError("GFT columns differ in length");
  Matrix m(eigvals.size(), 2);
  m.col(0) = eigvals;
  m.col(1) = coeffs;
  write_matrix_csv(path, m);
}

std::string transport_result_to_json(double linear_cost,
                                     std::optional<double> regularized_objective,
                                     int iterations, bool converged) {
  json j;
  j["linear_cost"] = linear_cost;
  j["regularized_objective"] = regularized_objective ? json(*regularized_objective) : json(nullptr);
  j["iterations"] = iterations;
  j["converged"] = converged;
  return j.dump(1) + "\n";
}

}  // namespace gswb::io
