// spt.hpp — testing-phase routing tree construction.
//
// Every non-sink node walks greedily toward the sink, scoring each unvisited
// graph neighbor u by Q(current, u) minus the Euclidean distance from u to
// the sink, so geometry breaks in wherever the table is uninformed. Visited
// nodes are excluded, which keeps each walk simple; a node whose candidates
// run out is a dead end, recorded rather than fatal. The tree edge for v is
// the first hop of v's own walk; the full multiset of traversed edges is kept
// separately for diagnostics.
//
// Tree file format (text): one line per node, sorted by linear index,
//   <x> <y> <parent_x> <parent_y> <layer>
// with `- -` in place of parent coordinates for the sink and for dead-end
// nodes.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qspt/graph.hpp"
#include "qspt/qtable.hpp"

namespace qspt {

inline constexpr int32_t kNoParent = -1;

struct RoutingTree {
  const GraphInstance* graph = nullptr;
  // All aligned to graph->nodes.
  std::vector<int32_t> parent;            // first hop node index; kNoParent for
                                          // the sink and for failed walks
  std::vector<int32_t> predicted_layers;  // walk length; 0 for the sink
  std::vector<uint8_t> failed;            // walk dead-ended before the sink
  // Every edge traversed by any walk, in walk order (diagnostics only).
  std::vector<std::pair<uint32_t, uint32_t>> walk_edges;
};

// Score for stepping from c to u: Q(c, u) - dist(u, sink).
double score(Location c, Location u, const QTable& q, Location sink);

struct Walk {
  std::vector<uint32_t> nodes;  // node indices, starts at v
  bool reached_sink = false;
};

// Greedy walk from v. Ties on equal scores go to the lowest linear index,
// which makes the whole testing phase deterministic.
Walk build_path(Location v, const GraphInstance& g, const QTable& q);

// Runs build_path for every non-sink node and assembles the tree.
RoutingTree build_tree(const GraphInstance& g, const QTable& q);

std::string serialize_tree(const RoutingTree& tree);

// Parsed tree rows re-attached to g by coordinate lookup. Validates that
// nodes match g exactly and that parents are nodes; walk_edges is left empty
// (it is not part of the format).
RoutingTree parse_tree(std::string_view text, const GraphInstance& g);

}  // namespace qspt
