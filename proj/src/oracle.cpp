#include "qspt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "qspt/util.hpp"

namespace qspt {

std::vector<int32_t> bfs_layers(const GraphInstance& g) {
  const size_t n = g.node_count();
  std::vector<int32_t> layers(n, -1);
  std::queue<uint32_t> frontier;
  const uint32_t sink = g.sink_node();
  layers[sink] = 0;
  frontier.push(sink);
  while (!frontier.empty()) {
    uint32_t v = frontier.front();
    frontier.pop();
    for (uint32_t u : g.adjacency[v]) {
      if (layers[u] < 0) {
        layers[u] = layers[v] + 1;
        frontier.push(u);
      }
    }
  }
  for (size_t i = 0; i < n; ++i)
    if (layers[i] < 0)
      throw std::invalid_argument("bfs_layers: graph not connected to sink");
  return layers;
}

double routing_accuracy(const RoutingTree& tree,
                        const std::vector<int32_t>& labels) {
  if (!tree.graph || tree.predicted_layers.size() != labels.size())
    throw std::invalid_argument("routing_accuracy: node set mismatch");
  size_t matches = 0;
  for (size_t v = 0; v < labels.size(); ++v)
    if (tree.predicted_layers[v] == labels[v]) ++matches;
  return static_cast<double>(matches) / static_cast<double>(labels.size());
}

std::vector<std::vector<double>> q_star(const GraphInstance& g, double gamma) {
  auto layers = bfs_layers(g);
  std::vector<std::vector<double>> out(g.node_count());
  for (size_t v = 0; v < g.node_count(); ++v) {
    out[v].reserve(g.adjacency[v].size());
    for (uint32_t u : g.adjacency[v])
      out[v].push_back(100.0 * std::pow(gamma, layers[u]));
  }
  return out;
}

TreeValidation validate_tree(const RoutingTree& tree, const GraphInstance& g) {
  const size_t n = g.node_count();
  if (!tree.graph || tree.parent.size() != n)
    throw std::invalid_argument("validate_tree: node set mismatch");
  TreeValidation report;
  const uint32_t sink = g.sink_node();

  for (uint32_t v = 0; v < n; ++v) {
    int32_t p = tree.parent[v];
    if (p == kNoParent) continue;
    const auto& adj = g.adjacency[v];
    if (!std::binary_search(adj.begin(), adj.end(), static_cast<uint32_t>(p)))
      report.bad_edges.push_back(g.nodes[v]);
  }

  for (uint32_t v = 0; v < n; ++v) {
    if (v == sink) continue;
    uint32_t c = v;
    size_t hops = 0;
    bool cycle = false, broken = false;
    while (c != sink) {
      if (tree.parent[c] == kNoParent) {
        broken = true;
        break;
      }
      c = static_cast<uint32_t>(tree.parent[c]);
      if (++hops > n) {  // revisit is unavoidable past n steps
        cycle = true;
        break;
      }
    }
    if (cycle) report.cycle_nodes.push_back(g.nodes[v]);
    if (broken) report.broken_chains.push_back(g.nodes[v]);
  }
  return report;
}

void AccuracyReport::finalize() {
  mean_accuracy = 0.0;
  pooled_accuracy = 0.0;
  stddev_accuracy = 0.0;
  total_dead_ends = 0;
  if (per_graph.empty()) return;
  double sum = 0.0;
  uint64_t pooled_matches_scaled = 0;  // accuracy * n is an exact integer
  uint64_t pooled_nodes = 0;
  for (const auto& row : per_graph) {
    sum += row.accuracy;
    pooled_matches_scaled +=
        static_cast<uint64_t>(std::llround(row.accuracy * row.n_nodes));
    pooled_nodes += row.n_nodes;
    total_dead_ends += row.dead_ends;
  }
  mean_accuracy = sum / static_cast<double>(per_graph.size());
  pooled_accuracy = static_cast<double>(pooled_matches_scaled) /
                    static_cast<double>(pooled_nodes);
  double sq = 0.0;
  for (const auto& row : per_graph) {
    double d = row.accuracy - mean_accuracy;
    sq += d * d;
  }
  stddev_accuracy = std::sqrt(sq / static_cast<double>(per_graph.size()));
}

std::string accuracy_report_csv(
    const AccuracyReport& report,
    const std::vector<std::string>& header_comments) {
  std::string out;
  for (const auto& c : header_comments) out += "# " + c + "\n";
  out += "graph_id,n_nodes,accuracy,dead_ends\n";
  for (const auto& row : report.per_graph) {
    out += std::to_string(row.graph_id) + "," + std::to_string(row.n_nodes) +
           "," + fmt_double(row.accuracy) + "," + std::to_string(row.dead_ends) +
           "\n";
  }
  // Aggregate row: dead_ends column carries the total across graphs.
  out += "mean,," + fmt_double(report.mean_accuracy) + "," +
         std::to_string(report.total_dead_ends) + "\n";
  return out;
}

}  // namespace qspt
