#include "qspt/spt.hpp"

#include <algorithm>

#include "qspt/util.hpp"

namespace qspt {

double score(Location c, Location u, const QTable& q, Location sink) {
  return q.lookup(c, u) - euclid_dist(u, sink);
}

Walk build_path(Location v, const GraphInstance& g, const QTable& q) {
  auto vi = g.find_node(v);
  if (!vi || v == g.sink)
    throw std::invalid_argument("build_path: start must be a non-sink node");

  const uint32_t sink_idx = g.sink_node();
  const size_t n = g.node_count();
  std::vector<char> visited(n, 0);

  Walk walk;
  walk.nodes.push_back(*vi);
  visited[*vi] = 1;
  uint32_t c = *vi;

  while (c != sink_idx && walk.nodes.size() <= n) {
    const Location c_loc = g.nodes[c];
    uint32_t best = UINT32_MAX;
    double best_score = 0.0;
    // Adjacency is sorted by linear index and comparison is strict, so the
    // lowest index wins score ties.
    for (uint32_t u : g.adjacency[c]) {
      if (visited[u]) continue;
      double s = score(c_loc, g.nodes[u], q, g.sink);
      if (best == UINT32_MAX || s > best_score) {
        best = u;
        best_score = s;
      }
    }
    if (best == UINT32_MAX) return walk;  // dead end
    walk.nodes.push_back(best);
    visited[best] = 1;
    c = best;
  }
  walk.reached_sink = (c == sink_idx);
  return walk;
}

RoutingTree build_tree(const GraphInstance& g, const QTable& q) {
  const size_t n = g.node_count();
  const uint32_t sink_idx = g.sink_node();

  RoutingTree tree;
  tree.graph = &g;
  tree.parent.assign(n, kNoParent);
  tree.predicted_layers.assign(n, 0);
  tree.failed.assign(n, 0);

  for (uint32_t v = 0; v < n; ++v) {
    if (v == sink_idx) continue;
    Walk walk = build_path(g.nodes[v], g, q);
    tree.predicted_layers[v] = static_cast<int32_t>(walk.nodes.size()) - 1;
    for (size_t i = 0; i + 1 < walk.nodes.size(); ++i)
      tree.walk_edges.emplace_back(walk.nodes[i], walk.nodes[i + 1]);
    if (walk.reached_sink) {
      tree.parent[v] = static_cast<int32_t>(walk.nodes[1]);
    } else {
      tree.failed[v] = 1;
    }
  }
  return tree;
}

std::string serialize_tree(const RoutingTree& tree) {
  const GraphInstance& g = *tree.graph;
  std::string out;
  for (uint32_t v = 0; v < g.node_count(); ++v) {
    out += std::to_string(g.nodes[v].x) + " " + std::to_string(g.nodes[v].y);
    if (tree.parent[v] == kNoParent) {
      out += " - -";
    } else {
      const Location p = g.nodes[static_cast<uint32_t>(tree.parent[v])];
      out += " " + std::to_string(p.x) + " " + std::to_string(p.y);
    }
    out += " " + std::to_string(tree.predicted_layers[v]) + "\n";
  }
  return out;
}

RoutingTree parse_tree(std::string_view text, const GraphInstance& g) {
  RoutingTree tree;
  tree.graph = &g;
  tree.parent.assign(g.node_count(), kNoParent);
  tree.predicted_layers.assign(g.node_count(), 0);
  tree.failed.assign(g.node_count(), 0);

  size_t rows = 0;
  const uint32_t sink_idx = g.sink_node();
  for_each_line(text, [&](std::string_view line) {
    auto tokens = split_ws(line);
    if (tokens.empty()) return;
    if (tokens.size() != 5) throw ParseError("tree line: expected 5 fields");
    Location v{static_cast<int32_t>(parse_int(tokens[0], "x")),
               static_cast<int32_t>(parse_int(tokens[1], "y"))};
    auto vi = g.find_node(v);
    if (!vi) throw ParseError("tree line: location is not a graph node");
    if (tokens[2] == "-" && tokens[3] == "-") {
      tree.parent[*vi] = kNoParent;
      if (*vi != sink_idx) tree.failed[*vi] = 1;
    } else {
      Location p{static_cast<int32_t>(parse_int(tokens[2], "parent_x")),
                 static_cast<int32_t>(parse_int(tokens[3], "parent_y"))};
      auto pi = g.find_node(p);
      if (!pi) throw ParseError("tree line: parent is not a graph node");
      tree.parent[*vi] = static_cast<int32_t>(*pi);
    }
    tree.predicted_layers[*vi] =
        static_cast<int32_t>(parse_int(tokens[4], "layer"));
    ++rows;
  });
  if (rows != g.node_count())
    throw ParseError("tree: row count does not match graph node count");
  return tree;
}

}  // namespace qspt
