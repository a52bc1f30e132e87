#include "gswb/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "gswb/error.hpp"

namespace gswb {

namespace {

struct Rgb {
  double r, g, b;
};

constexpr std::array<Rgb, 3> kRamp{{{255, 247, 188}, {65, 182, 196}, {8, 29, 88}}};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string ramp_color(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double pos = t * static_cast<double>(kRamp.size() - 1);
  const std::size_t lo = std::min<std::size_t>(static_cast<std::size_t>(pos), kRamp.size() - 2);
  const double f = pos - static_cast<double>(lo);
  auto mix = [&](double a, double b) { return static_cast<int>(std::lround(a + f * (b - a))); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(kRamp[lo].r, kRamp[lo + 1].r),
                mix(kRamp[lo].g, kRamp[lo + 1].g), mix(kRamp[lo].b, kRamp[lo + 1].b));
  return buf;
}

std::string render_svg(const Graph& g, const GraphSignal& x, const RenderSpec& spec) {
  if (!g.coords) throw ValidationError("graph has no coordinates to render");
  if (x.size() != g.size()) throw ValidationError("signal length does not match the graph");
  if (!(spec.canvas_width > 0.0) || !(spec.canvas_height > 0.0) || !(spec.node_radius > 0.0)) {
    throw ValidationError("render dimensions must be positive");
  }
  const Matrix& xy = *g.coords;
  const Index n = g.size();

  const double margin = 2.5 * spec.node_radius;
  const double min_x = xy.col(0).minCoeff();
  const double max_x = xy.col(0).maxCoeff();
  const double min_y = xy.col(1).minCoeff();
  const double max_y = xy.col(1).maxCoeff();
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
  const double scale = std::min(spec.canvas_width, spec.canvas_height) - 2.0 * margin;
  auto px = [&](Index i) { return margin + (xy(i, 0) - min_x) / span * scale; };
  // SVG y grows downwards.
  auto py = [&](Index i) { return spec.canvas_height - margin - (xy(i, 1) - min_y) / span * scale; };

  Index argmax = 0;
  const double peak = x.values().maxCoeff(&argmax);
  const Index ring = spec.highlight.value_or(argmax);
  if (ring < 0 || ring >= n) throw ValidationError("highlight node out of range");

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(spec.canvas_width) +
         "\" height=\"" + fmt(spec.canvas_height) + "\" viewBox=\"0 0 " +
         fmt(spec.canvas_width) + " " + fmt(spec.canvas_height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (!spec.title.empty()) {
    svg += "<text x=\"" + fmt(margin) + "\" y=\"" + fmt(0.8 * margin) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(spec.title) + "</text>\n";
  }
  svg += "<g stroke=\"#9e9e9e\" stroke-width=\"0.8\">\n";
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (g.weights(i, j) > 0.0) {
        svg += "<line x1=\"" + fmt(px(i)) + "\" y1=\"" + fmt(py(i)) + "\" x2=\"" + fmt(px(j)) +
               "\" y2=\"" + fmt(py(j)) + "\"/>\n";
      }
    }
  }
  svg += "</g>\n<g stroke=\"#424242\" stroke-width=\"0.5\">\n";
  for (Index i = 0; i < n; ++i) {
    const double t = peak > 0.0 ? x[i] / peak : 0.0;
    svg += "<circle cx=\"" + fmt(px(i)) + "\" cy=\"" + fmt(py(i)) + "\" r=\"" +
           fmt(spec.node_radius) + "\" fill=\"" + ramp_color(t) + "\"/>\n";
  }
  svg += "</g>\n";
  svg += "<circle class=\"highlight\" cx=\"" + fmt(px(ring)) + "\" cy=\"" + fmt(py(ring)) +
         "\" r=\"" + fmt(1.8 * spec.node_radius) +
         "\" fill=\"none\" stroke=\"#ff8c00\" stroke-width=\"2.5\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace gswb
