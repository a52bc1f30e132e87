#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gswb/graph.hpp"
#include "gswb/spectral.hpp"
#include "gswb/transport.hpp"
#include "gswb/types.hpp"

namespace gswb::io {

namespace fs = std::filesystem;

// Graph JSON:
//   {"n": int, "weights": [[float]], "coords": [[x, y]] | null,
//    "kind": "ring" | "sensor" | "custom", "seed": int | null}
std::string graph_to_json(const Graph& g);
Graph graph_from_json(std::string_view text);
void write_graph(const fs::path& path, const Graph& g);
Graph read_graph(const fs::path& path);

enum class SignalKind { heat, diffusion, custom };

struct SignalMeta {
  SignalKind kind = SignalKind::custom;
  std::optional<double> tau;
  std::optional<Index> center;
};

struct SignalFile {
  GraphSignal signal;
  SignalMeta meta;
};

// Signal JSON:
//   {"n": int, "values": [float],
//    "meta": {"kind": "heat" | "diffusion" | "custom", "tau": float | null,
//             "center": int | null}}
std::string signal_to_json(const GraphSignal& x, const SignalMeta& meta = {});
SignalFile signal_from_json(std::string_view text);
void write_signal(const fs::path& path, const GraphSignal& x, const SignalMeta& meta = {});
SignalFile read_signal(const fs::path& path);

// All *.json signal files in a directory, sorted by file name.
std::vector<SignalFile> read_signal_dir(const fs::path& dir);

// Headerless CSV, one matrix row per line, values printed with %.17g so a
// read/write cycle reproduces the bytes.
std::string matrix_to_csv(const Matrix& m);
Matrix matrix_from_csv(std::string_view text);
void write_matrix_csv(const fs::path& path, const Matrix& m);
Matrix read_matrix_csv(const fs::path& path);

void write_cost_csv(const fs::path& path, const CostMatrix& c);
CostMatrix read_cost_csv(const fs::path& path);

// Rows of (eigenvalue, coefficient).
void write_gft_csv(const fs::path& path, const Vector& eigvals, const Vector& coeffs);

// {"linear_cost": float, "regularized_objective": float | null,
//  "iterations": int, "converged": bool}
std::string transport_result_to_json(double linear_cost,
                                     std::optional<double> regularized_objective,
                                     int iterations, bool converged);

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, std::string_view text);

std::string format_double(double v);

}  // namespace gswb::io
