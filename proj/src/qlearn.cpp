#include "qspt/qlearn.hpp"

#include <algorithm>
#include <stdexcept>

namespace qspt {

void validate_hyperparams(const Hyperparams& h) {
  if (!(h.alpha > 0.0 && h.alpha <= 1.0))
    throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(h.gamma >= 0.0 && h.gamma < 1.0))
    throw std::invalid_argument("gamma must be in [0, 1)");
  if (!(h.epsilon >= 0.0 && h.epsilon <= 1.0))
    throw std::invalid_argument("epsilon must be in [0, 1]");
}

size_t select_index(Rng& rng, double epsilon, std::span<const double> qvals) {
  if (qvals.empty()) throw std::invalid_argument("empty candidate set");
  if (rng.uniform_double() < epsilon)
    return static_cast<size_t>(rng.uniform_below(qvals.size()));

  double best = qvals[0];
  size_t best_idx = 0, ties = 1;
  for (size_t i = 1; i < qvals.size(); ++i) {
    if (qvals[i] > best) {
      best = qvals[i];
      best_idx = i;
      ties = 1;
    } else if (qvals[i] == best) {
      ++ties;
    }
  }
  if (ties == 1) return best_idx;
  uint64_t pick = rng.uniform_below(ties);
  for (size_t i = best_idx;; ++i) {
    if (qvals[i] == best && pick-- == 0) return i;
  }
}

double reward(Location v, Location u, const GraphInstance& g) {
  auto vi = g.find_node(v);
  if (!vi) throw std::invalid_argument("reward: v is not a node");
  auto ui = g.find_node(u);
  if (!ui) throw std::invalid_argument("reward: u is not a node");
  const auto& adj = g.adjacency[*vi];
  bool neighbor = std::find(adj.begin(), adj.end(), *ui) != adj.end();
  if (!neighbor)
    throw std::invalid_argument("reward: u is not a graph neighbor of v");
  return u == g.sink ? 100.0 : 0.0;
}

namespace {

// Per-graph binding: table slots resolved once so the episode loop is pure
// array indexing. Also reused by the distributed runtime's episode driver.
struct BoundGraph {
  const GraphInstance* g = nullptr;
  uint32_t sink_idx = 0;
  std::vector<uint32_t> non_sink;          // node indices, sorted
  std::vector<std::vector<size_t>> slots;  // slots[i][k] for edge (i, adj[i][k])

  BoundGraph(const GraphInstance& graph, const QTable& q) : g(&graph) {
    sink_idx = graph.sink_node();
    const size_t n = graph.node_count();
    non_sink.reserve(n > 0 ? n - 1 : 0);
    slots.resize(n);
    for (uint32_t i = 0; i < n; ++i) {
      if (i != sink_idx) non_sink.push_back(i);
      uint32_t from = loc_index(graph.nodes[i], q.params());
      slots[i].reserve(graph.adjacency[i].size());
      for (uint32_t j : graph.adjacency[i]) {
        size_t s = q.slot(from, loc_index(graph.nodes[j], q.params()));
        if (s == SIZE_MAX)
          throw std::invalid_argument(
              "graph edge is not a grid-neighbor pair for this table");
        slots[i].push_back(s);
      }
    }
  }
};

EpisodeResult run_bound_episode(const BoundGraph& b, QTable& q,
                                const Hyperparams& h, uint32_t start_idx,
                                Rng& rng, std::vector<double>& scratch,
                                std::vector<uint32_t>* visit_counts) {
  const GraphInstance& g = *b.g;
  const uint32_t cap = h.step_cap(g.node_count());
  EpisodeResult result;
  uint32_t v = start_idx;
  while (v != b.sink_idx) {
    if (result.steps >= cap) {
      result.truncated = true;
      return result;
    }
    const auto& adj = g.adjacency[v];
    if (adj.empty()) {
      result.dead_end = true;
      return result;
    }
    scratch.resize(adj.size());
    for (size_t k = 0; k < adj.size(); ++k)
      scratch[k] = q.value_at(b.slots[v][k]);
    size_t pick = select_index(rng, h.epsilon, scratch);

    const uint32_t u = adj[pick];
    const size_t edge_slot = b.slots[v][pick];
    const double r = (u == b.sink_idx) ? 100.0 : 0.0;

    double max_next = 0.0;
    for (size_t s : b.slots[u]) {
      double qv = q.value_at(s);
      if (qv > max_next) max_next = qv;
    }

    q.set_value_at(edge_slot,
                   bellman_mix(q.value_at(edge_slot), r, max_next, h.alpha, h.gamma));
    if (visit_counts) ++(*visit_counts)[edge_slot];
    v = u;
    ++result.steps;
  }
  result.reached_sink = true;
  return result;
}

}  // namespace

Location select_action(Location v, const GraphInstance& g, const QTable& q,
                       double epsilon, Rng& rng) {
  auto candidates = g.graph_neighbors(v);  // throws when v is not a node
  if (candidates.empty())
    throw std::invalid_argument("select_action: dead end, no graph neighbors");
  std::vector<double> qvals(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i)
    qvals[i] = q.lookup(v, candidates[i]);
  return candidates[select_index(rng, epsilon, qvals)];
}

double bellman_update(QTable& q, Location v, Location u, double r,
                      const GraphInstance& g, double alpha, double gamma) {
  auto vi = g.find_node(v);
  auto ui = g.find_node(u);
  if (!vi || !ui) throw std::invalid_argument("bellman_update: not a node");
  size_t edge_slot = q.slot(loc_index(v, q.params()), loc_index(u, q.params()));
  const auto& adj = g.adjacency[*vi];
  if (edge_slot == SIZE_MAX ||
      std::find(adj.begin(), adj.end(), *ui) == adj.end())
    throw std::invalid_argument("bellman_update: u is not a graph neighbor of v");

  double max_next = 0.0;
  uint32_t from_u = loc_index(u, q.params());
  for (uint32_t j : g.adjacency[*ui]) {
    double qv = q.lookup(from_u, loc_index(g.nodes[j], q.params()));
    if (qv > max_next) max_next = qv;
  }
  double updated = bellman_mix(q.value_at(edge_slot), r, max_next, alpha, gamma);
  q.set_value_at(edge_slot, updated);
  return updated;
}

EpisodeResult run_episode(const GraphInstance& g, QTable& q,
                          const Hyperparams& h, Location start, Rng& rng,
                          std::vector<uint32_t>* visit_counts) {
  validate_hyperparams(h);
  auto si = g.find_node(start);
  if (!si || start == g.sink)
    throw std::invalid_argument("run_episode: start must be a non-sink node");
  if (visit_counts) visit_counts->resize(q.entry_count(), 0);
  BoundGraph bound(g, q);
  std::vector<double> scratch;
  return run_bound_episode(bound, q, h, *si, rng, scratch, visit_counts);
}

TrainResult train(std::span<const GraphInstance> graphs, const Hyperparams& h,
                  uint64_t seed, const TrainOptions& options) {
  validate_hyperparams(h);
  if (graphs.empty()) throw std::invalid_argument("train: no graphs");
  for (const auto& g : graphs) {
    if (!(g.params == graphs[0].params) || !(g.sink == graphs[0].sink))
      throw std::invalid_argument("train: graphs disagree on grid params or sink");
  }

  TrainResult result{QTable::init(graphs[0].params), {}};
  if (options.visit_counts)
    options.visit_counts->assign(result.table.entry_count(), 0);

  Rng rng(seed);
  std::vector<double> scratch;
  const uint64_t total =
      static_cast<uint64_t>(graphs.size()) * h.episodes_per_graph;
  constexpr uint64_t kReportEvery = 10000;
  uint64_t window_steps = 0, window_episodes = 0;

  for (const GraphInstance& g : graphs) {
    BoundGraph bound(g, result.table);
    if (bound.non_sink.empty()) continue;  // singleton graph: nothing to learn
    for (uint32_t k = 0; k < h.episodes_per_graph; ++k) {
      uint32_t start =
          bound.non_sink[rng.uniform_below(bound.non_sink.size())];
      EpisodeResult ep = run_bound_episode(bound, result.table, h, start, rng,
                                           scratch, options.visit_counts);
      result.stats.episodes += 1;
      result.stats.steps += ep.steps;
      result.stats.reached_sink += ep.reached_sink ? 1 : 0;
      result.stats.truncated += ep.truncated ? 1 : 0;
      result.stats.dead_ends += ep.dead_end ? 1 : 0;
      window_steps += ep.steps;
      window_episodes += 1;
      if (options.progress && (result.stats.episodes % kReportEvery == 0 ||
                               result.stats.episodes == total)) {
        options.progress({result.stats.episodes, total,
                          window_episodes
                              ? static_cast<double>(window_steps) / window_episodes
                              : 0.0});
        window_steps = window_episodes = 0;
      }
    }
  }
  return result;
}

}  // namespace qspt
