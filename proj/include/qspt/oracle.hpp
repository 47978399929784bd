// oracle.hpp — exact shortest paths and the checks built on them.
//
// BFS gives ground-truth hop layers (unit edge weights make Dijkstra a BFS).
// From those layers the analytic convergence target follows directly:
// with reward 100 only at the sink and discount g, a converged table holds
// Q*(v, u) = 100 * g^(hops from u to sink) for every graph edge (v, u).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qspt/graph.hpp"
#include "qspt/spt.hpp"

namespace qspt {

// Hop distance to the sink per node, aligned to g.nodes. Throws when some
// node cannot reach the sink.
std::vector<int32_t> bfs_layers(const GraphInstance& g);

// Fraction of nodes (sink included) whose predicted layer equals the BFS
// layer. Dead-end nodes keep their truncated walk length and so count as
// mismatches.
double routing_accuracy(const RoutingTree& tree,
                        const std::vector<int32_t>& labels);

// Q*(v, u) aligned to g.adjacency: q_star[i][k] is the converged value for
// the edge (nodes[i], nodes[adjacency[i][k]]).
std::vector<std::vector<double>> q_star(const GraphInstance& g, double gamma);

struct TreeValidation {
  // Parent edges missing from the graph adjacency.
  std::vector<Location> bad_edges;
  // Nodes whose parent chain revisits a node (cycle in the parent map).
  std::vector<Location> cycle_nodes;
  // Nodes whose parent chain stops at a parentless non-sink node.
  std::vector<Location> broken_chains;

  bool ok() const {
    return bad_edges.empty() && cycle_nodes.empty() && broken_chains.empty();
  }
};

// Checks every parent edge exists in g and that parent chains terminate at
// the sink. Reports violations instead of throwing.
TreeValidation validate_tree(const RoutingTree& tree, const GraphInstance& g);

// Per-graph accuracy rows plus the aggregate, the shape of the experiment
// tables. mean_accuracy is the mean of per-graph fractions; pooled_accuracy
// weights every node equally across graphs.
struct AccuracyRow {
  uint32_t graph_id = 0;
  uint32_t n_nodes = 0;
  double accuracy = 0.0;
  uint32_t dead_ends = 0;
};

struct AccuracyReport {
  std::vector<AccuracyRow> per_graph;
  double mean_accuracy = 0.0;
  double pooled_accuracy = 0.0;
  double stddev_accuracy = 0.0;
  uint64_t total_dead_ends = 0;

  // Recomputes the aggregate fields from per_graph. Mean is the plain
  // arithmetic mean in row order.
  void finalize();
};

std::string accuracy_report_csv(const AccuracyReport& report,
                                const std::vector<std::string>& header_comments);

}  // namespace qspt
