#pragma once

#include <optional>
#include <string>

#include "gswb/graph.hpp"
#include "gswb/spectral.hpp"

namespace gswb {

struct RenderSpec {
  double canvas_width = 480.0;
  double canvas_height = 480.0;
  double node_radius = 7.0;
  // Nodes are filled by value / max(value) along a fixed three-stop ramp
  // from pale yellow through teal to dark navy.
  std::string title;
  // Node ringed with the orange highlight; the signal's argmax when unset.
  std::optional<Index> highlight;
};

// Deterministic SVG: edges as lines, nodes as colored circles, one node
// ringed. Throws ValidationError when the graph has no coordinates.
std::string render_svg(const Graph& g, const GraphSignal& x, const RenderSpec& spec = {});

// Ramp color for t in [0, 1] as "#rrggbb".
std::string ramp_color(double t);

}  // namespace gswb
