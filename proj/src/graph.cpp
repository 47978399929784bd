#include "qspt/graph.hpp"

#include <algorithm>
#include <queue>

namespace qspt {

std::optional<uint32_t> GraphInstance::find_node(Location v) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
  if (it == nodes.end() || !(*it == v)) return std::nullopt;
  return static_cast<uint32_t>(it - nodes.begin());
}

std::vector<Location> GraphInstance::graph_neighbors(Location v) const {
  auto idx = find_node(v);
  if (!idx) throw std::invalid_argument("location is not a node of this graph");
  std::vector<Location> out;
  out.reserve(adjacency[*idx].size());
  for (uint32_t j : adjacency[*idx]) out.push_back(nodes[j]);
  return out;
}

std::vector<std::vector<uint32_t>> build_adjacency(
    const std::vector<Location>& nodes, const GridParams& params) {
  const size_t n = nodes.size();
  std::vector<std::vector<uint32_t>> adj(n);
  const int64_t r2 = params.range_sq();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (dist_sq(nodes[i], nodes[j]) <= r2) {
        adj[i].push_back(static_cast<uint32_t>(j));
        adj[j].push_back(static_cast<uint32_t>(i));
      }
    }
  }
  // Nodes are sorted by index, so the inner pushes already arrive sorted for
  // adj[i]; the back-edges for adj[j] do too (i increases).
  return adj;
}

void validate_instance(const GraphInstance& g) {
  validate_params(g.params);
  if (!in_bounds(g.sink, g.params)) throw ParseError("sink outside grid");
  if (g.nodes.empty()) throw ParseError("n: node set is empty");
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    if (!in_bounds(g.nodes[i], g.params))
      throw ParseError("node coordinate outside grid");
    if (i > 0 && !(g.nodes[i - 1] < g.nodes[i]))
      throw ParseError("nodes: duplicate or unsorted coordinates");
  }
  if (!g.find_node(g.sink)) throw ParseError("sink is not in the node set");
  if (g.adjacency != build_adjacency(g.nodes, g.params))
    throw ParseError("adjacency disagrees with the range predicate");
  auto reach = is_connected_to_sink(g);
  if (!reach.connected)
    throw ParseError("graph not connected: " +
                     std::to_string(reach.unreachable.size()) +
                     " node(s) cannot reach the sink");
}

Reachability is_connected_to_sink(const GraphInstance& g) {
  std::vector<char> seen(g.node_count(), 0);
  std::queue<uint32_t> frontier;
  uint32_t sink = g.sink_node();
  seen[sink] = 1;
  frontier.push(sink);
  size_t reached = 1;
  while (!frontier.empty()) {
    uint32_t v = frontier.front();
    frontier.pop();
    for (uint32_t u : g.adjacency[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        frontier.push(u);
      }
    }
  }
  Reachability out;
  out.connected = reached == g.node_count();
  for (size_t i = 0; i < g.node_count(); ++i)
    if (!seen[i]) out.unreachable.push_back(g.nodes[i]);
  return out;
}

GraphInstance generate_graph(const GridParams& params, uint32_t n_nodes,
                             Location sink, uint64_t seed) {
  validate_params(params);
  if (!in_bounds(sink, params)) throw std::invalid_argument("sink outside grid");
  const uint64_t capacity =
      static_cast<uint64_t>(params.width) * static_cast<uint64_t>(params.width);
  if (n_nodes == 0) throw std::invalid_argument("n_nodes must be positive");
  if (n_nodes > capacity)
    throw std::invalid_argument("n_nodes exceeds grid capacity W^2");

  constexpr int kRetryBudget = 1000;
  Rng rng(seed);
  for (int attempt = 1; attempt <= kRetryBudget; ++attempt) {
    std::vector<char> occupied(capacity, 0);
    std::vector<Location> nodes;
    nodes.reserve(n_nodes);
    occupied[loc_index(sink, params)] = 1;
    nodes.push_back(sink);
    // Rejection sampling keeps the node set distinct and uniform over the
    // remaining grid points. Draw order: x then y per candidate.
    while (nodes.size() < n_nodes) {
      Location v{static_cast<int32_t>(rng.uniform_below(params.width)),
                 static_cast<int32_t>(rng.uniform_below(params.width))};
      uint32_t idx = loc_index(v, params);
      if (occupied[idx]) continue;
      occupied[idx] = 1;
      nodes.push_back(v);
    }
    std::sort(nodes.begin(), nodes.end());

    GraphInstance g;
    g.params = params;
    g.sink = sink;
    g.nodes = std::move(nodes);
    g.adjacency = build_adjacency(g.nodes, params);
    if (is_connected_to_sink(g).connected) return g;
  }
  throw GenerationError(
      "failed to generate a sink-connected graph within the retry budget",
      kRetryBudget);
}

std::string serialize_graph(const GraphInstance& g) {
  std::string out;
  out += "W " + std::to_string(g.params.width) + "\n";
  out += "R " + fmt_double(g.params.range) + "\n";
  out += "sink_x " + std::to_string(g.sink.x) + "\n";
  out += "sink_y " + std::to_string(g.sink.y) + "\n";
  out += "n " + std::to_string(g.nodes.size()) + "\n";
  for (const Location& v : g.nodes)
    out += std::to_string(v.x) + " " + std::to_string(v.y) + "\n";
  return out;
}

namespace {

std::string_view expect_field(const std::vector<std::string_view>& tokens,
                              const char* key) {
  if (tokens.size() != 2 || tokens[0] != key)
    throw ParseError(std::string("expected header field '") + key + "'");
  return tokens[1];
}

}  // namespace

GraphInstance parse_graph(std::string_view text) {
  std::vector<std::vector<std::string_view>> lines;
  for_each_line(text, [&](std::string_view line) {
    auto tokens = split_ws(line);
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  });
  if (lines.size() < 5) throw ParseError("truncated graph header");

  GraphInstance g;
  g.params.width =
      static_cast<int32_t>(parse_int(expect_field(lines[0], "W"), "W"));
  g.params.range = parse_double(expect_field(lines[1], "R"), "R");
  g.sink.x =
      static_cast<int32_t>(parse_int(expect_field(lines[2], "sink_x"), "sink_x"));
  g.sink.y =
      static_cast<int32_t>(parse_int(expect_field(lines[3], "sink_y"), "sink_y"));
  long long n = parse_int(expect_field(lines[4], "n"), "n");
  if (n <= 0) throw ParseError("n: must be positive");
  if (lines.size() != 5 + static_cast<size_t>(n))
    throw ParseError("n: node line count mismatch");

  g.nodes.reserve(static_cast<size_t>(n));
  for (size_t i = 5; i < lines.size(); ++i) {
    if (lines[i].size() != 2) throw ParseError("node line: expected 'x y'");
    g.nodes.push_back(
        Location{static_cast<int32_t>(parse_int(lines[i][0], "x")),
                 static_cast<int32_t>(parse_int(lines[i][1], "y"))});
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  g.adjacency = build_adjacency(g.nodes, g.params);
  validate_instance(g);
  return g;
}

}  // namespace qspt
