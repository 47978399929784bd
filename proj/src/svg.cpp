#include "qspt/svg.hpp"

#include <algorithm>
#include <cstdio>

#include "qspt/util.hpp"

namespace qspt {

namespace {

std::string num(double v) {
  // Two decimals is plenty for pixel coordinates and keeps files small.
  char buf[32];
  int len = snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf, static_cast<size_t>(len));
}

// Cold-to-warm sweep by layer: far nodes blue, sink-adjacent nodes red.
std::string layer_color(int32_t layer, int32_t max_layer) {
  if (max_layer < 1) max_layer = 1;
  double t = std::clamp(static_cast<double>(layer) / max_layer, 0.0, 1.0);
  int r = static_cast<int>(220 * (1.0 - t) + 30 * t);
  int gch = static_cast<int>(60 + 80 * (1.0 - t));
  int b = static_cast<int>(30 * (1.0 - t) + 220 * t);
  char buf[16];
  snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, gch, b);
  return buf;
}

}  // namespace

std::string render_svg(const GraphInstance& g, const RoutingTree& tree,
                       const std::vector<int32_t>& layers,
                       const SvgOptions& options) {
  if (tree.parent.size() != g.node_count() || layers.size() != g.node_count())
    throw std::invalid_argument("render_svg: tree/layers do not match graph");

  const double u = options.unit_px;
  const double m = options.margin_px;
  const double side = (g.params.width - 1) * u + 2 * m;
  auto px = [&](Location v) { return m + v.x * u; };
  // Flip y so the origin sits bottom-left, the usual plot orientation.
  auto py = [&](Location v) { return side - (m + v.y * u); };

  int32_t max_layer = 1;
  for (int32_t l : layers) max_layer = std::max(max_layer, l);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(side) +
         "\" height=\"" + num(side) + "\" viewBox=\"0 0 " + num(side) + " " +
         num(side) + "\">\n";
  out +=
      "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" "
      "markerWidth=\"5\" markerHeight=\"5\" orient=\"auto-start-reverse\">"
      "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#444444\"/></marker></defs>\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty())
    out += "<text x=\"" + num(m) + "\" y=\"" + num(m * 0.7) +
           "\" font-size=\"12\" fill=\"#333333\">" + options.title + "</text>\n";

  // Dotted underlay: each undirected graph edge once.
  for (uint32_t i = 0; i < g.node_count(); ++i) {
    for (uint32_t j : g.adjacency[i]) {
      if (j <= i) continue;
      out += "<line class=\"g\" x1=\"" + num(px(g.nodes[i])) + "\" y1=\"" +
             num(py(g.nodes[i])) + "\" x2=\"" + num(px(g.nodes[j])) +
             "\" y2=\"" + num(py(g.nodes[j])) +
             "\" stroke=\"#b0b0b0\" stroke-width=\"0.6\" "
             "stroke-dasharray=\"2,3\"/>\n";
    }
  }

  // Solid directed tree edges, child to parent.
  for (uint32_t v = 0; v < g.node_count(); ++v) {
    if (tree.parent[v] == kNoParent) continue;
    Location child = g.nodes[v];
    Location par = g.nodes[static_cast<uint32_t>(tree.parent[v])];
    out += "<line class=\"t\" x1=\"" + num(px(child)) + "\" y1=\"" +
           num(py(child)) + "\" x2=\"" + num(px(par)) + "\" y2=\"" +
           num(py(par)) +
           "\" stroke=\"#444444\" stroke-width=\"1.4\" "
           "marker-end=\"url(#arrow)\"/>\n";
  }

  // Node glyphs: exactly one circle per node.
  const uint32_t sink_idx = g.sink_node();
  for (uint32_t v = 0; v < g.node_count(); ++v) {
    std::string cls = "n", fill = layer_color(layers[v], max_layer);
    double radius = 3.0;
    if (v == sink_idx) {
      cls = "sink";
      fill = "#000000";
      radius = 6.0;
    } else if (tree.failed[v]) {
      cls = "fail";
      fill = "#ff00ff";
      radius = 4.0;
    }
    out += "<circle class=\"" + cls + "\" cx=\"" + num(px(g.nodes[v])) +
           "\" cy=\"" + num(py(g.nodes[v])) + "\" r=\"" + num(radius) +
           "\" fill=\"" + fill + "\" stroke=\"#222222\" stroke-width=\"0.5\"/>\n";
  }

  out += "</svg>\n";
  return out;
}

}  // namespace qspt
