// svg.hpp — figures: the network with its routing tree overlay.
//
// Underlay: every graph edge as a dotted line. Overlay: solid directed tree
// edges (child to parent). Nodes are circles colored by hop layer, the sink
// gets a distinct marker color and size, dead-end nodes a failure color.

#pragma once

#include <string>
#include <vector>

#include "qspt/graph.hpp"
#include "qspt/spt.hpp"

namespace qspt {

struct SvgOptions {
  double unit_px = 8.0;   // pixels per grid unit
  double margin_px = 20.0;
  std::string title;      // optional caption text
};

// Layers drive the node color map; pass BFS layers to draw the oracle tree
// or predicted layers for a learned tree.
std::string render_svg(const GraphInstance& g, const RoutingTree& tree,
                       const std::vector<int32_t>& layers,
                       const SvgOptions& options = {});

}  // namespace qspt
