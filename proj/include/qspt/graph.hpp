// graph.hpp — random geometric network instances with a fixed sink.
//
// A GraphInstance is one deployment: a set of distinct node locations on the
// grid (always containing the sink) plus the adjacency induced by the range
// predicate. Instances are immutable once built and safe to share across
// threads.
//
// On-disk format (text, one document per graph):
//   W <int>
//   R <real>
//   sink_x <int>
//   sink_y <int>
//   n <int>
//   <x> <y>          (n lines, sorted by linear index)
// Edges are not stored; they are recomputed from the range predicate on load,
// which is bit-exact thanks to the integer squared-distance comparison.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qspt/grid.hpp"
#include "qspt/rng.hpp"

namespace qspt {

struct GraphInstance {
  GridParams params;
  Location sink;
  std::vector<Location> nodes;  // distinct, sorted by linear index, sink included
  std::vector<std::vector<uint32_t>> adjacency;  // node indices, sorted

  size_t node_count() const { return nodes.size(); }

  // Index of a location in `nodes`, if occupied.
  std::optional<uint32_t> find_node(Location v) const;
  uint32_t sink_node() const { return *find_node(sink); }

  // Graph-specific neighbors N^V(v): grid neighbors intersected with the node
  // set. Throws if v is not a node.
  std::vector<Location> graph_neighbors(Location v) const;
};

// Recomputes adjacency from node coordinates. Used by the generator, the
// parser, and the validity check below.
std::vector<std::vector<uint32_t>> build_adjacency(
    const std::vector<Location>& nodes, const GridParams& params);

// Structural invariants: params valid, coordinates in bounds and distinct,
// sink present, adjacency equal to the range predicate, all nodes reachable
// from the sink. Throws ParseError naming the violated field.
void validate_instance(const GraphInstance& g);

struct Reachability {
  bool connected = false;
  std::vector<Location> unreachable;
};

// Breadth-first reachability from the sink over the stored adjacency.
Reachability is_connected_to_sink(const GraphInstance& g);

// Samples n_nodes distinct uniform locations (sink forced into the set),
// recomputes edges, and rejects whole graphs until every node reaches the
// sink. Deterministic for a given seed. Throws GenerationError when the
// retry budget (1000 attempts) is exhausted, std::invalid_argument when
// n_nodes exceeds W^2 or the sink is out of bounds.
GraphInstance generate_graph(const GridParams& params, uint32_t n_nodes,
                             Location sink, uint64_t seed);

std::string serialize_graph(const GraphInstance& g);
GraphInstance parse_graph(std::string_view text);

}  // namespace qspt
