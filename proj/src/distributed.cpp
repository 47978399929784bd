#include "qspt/distributed.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qspt {

QSummaryMsg NodeAgent::summary() const {
  return QSummaryMsg{location, row_max(q_row)};
}

double agent_update(NodeAgent& agent, Location u, double reward,
                    const QSummaryMsg& summary, double alpha, double gamma) {
  if (!(summary.sender == u))
    throw std::invalid_argument(
        "agent_update: summary sender is not the chosen neighbor");
  auto it = std::lower_bound(agent.neighbors.begin(), agent.neighbors.end(), u);
  if (it == agent.neighbors.end() || !(*it == u))
    throw std::invalid_argument("agent_update: u is not a neighbor of this agent");
  size_t k = static_cast<size_t>(it - agent.neighbors.begin());
  agent.q_row[k] = bellman_mix(agent.q_row[k], reward, summary.max_q, alpha, gamma);
  return agent.q_row[k];
}

namespace {

void emit_trace(std::ostream* trace, uint64_t step, const NodeAgent& sender,
                const NodeAgent& receiver, double max_q) {
  if (!trace) return;
  *trace << step << ',' << sender.location.x << ',' << sender.location.y << ','
         << receiver.location.x << ',' << receiver.location.y << ','
         << fmt_double(max_q) << '\n';
}

// One deployment: agents for graph g seeded from the shared table, K
// episodes, rows written back at the end.
void run_deployment(const GraphInstance& g, const Hyperparams& h, Rng& rng,
                    const DistOptions& options, QTable& table,
                    DistResult& result) {
  const size_t n = g.node_count();
  const uint32_t sink_idx = g.sink_node();
  const bool stale = options.stale_threshold.has_value();
  const double threshold = options.stale_threshold.value_or(0.0);

  std::vector<NodeAgent> agents(n);
  std::vector<std::vector<size_t>> table_slots(n);
  std::vector<uint32_t> non_sink;
  for (uint32_t i = 0; i < n; ++i) {
    agents[i].location = g.nodes[i];
    const auto& adj = g.adjacency[i];
    agents[i].neighbors.reserve(adj.size());
    agents[i].q_row.reserve(adj.size());
    table_slots[i].reserve(adj.size());
    uint32_t from = loc_index(g.nodes[i], g.params);
    for (uint32_t j : adj) {
      agents[i].neighbors.push_back(g.nodes[j]);
      size_t s = table.slot(from, loc_index(g.nodes[j], g.params));
      table_slots[i].push_back(s);
      agents[i].q_row.push_back(table.value_at(s));
    }
    agents[i].neighbor_max_cache.assign(adj.size(), 0.0);
    if (i != sink_idx) non_sink.push_back(i);
  }
  // Position of node i within each neighbor j's list, for cache pushes.
  std::vector<std::vector<size_t>> slot_of(n);
  for (uint32_t i = 0; i < n; ++i) {
    slot_of[i].resize(g.adjacency[i].size());
    for (size_t k = 0; k < g.adjacency[i].size(); ++k) {
      uint32_t j = g.adjacency[i][k];
      auto it = std::lower_bound(g.adjacency[j].begin(), g.adjacency[j].end(), i);
      slot_of[i][k] = static_cast<size_t>(it - g.adjacency[j].begin());
    }
  }

  auto push_summary = [&](uint32_t i) {
    NodeAgent& a = agents[i];
    double m = row_max(a.q_row);
    a.last_pushed_max = m;
    for (size_t k = 0; k < g.adjacency[i].size(); ++k) {
      uint32_t j = g.adjacency[i][k];
      agents[j].neighbor_max_cache[slot_of[i][k]] = m;
      result.messages += 1;
      emit_trace(options.trace, result.updates, a, agents[j], m);
    }
  };

  // Stale mode starts each deployment with one summary broadcast per node so
  // caches reflect values carried over from earlier graphs.
  if (stale)
    for (uint32_t i = 0; i < n; ++i) push_summary(i);

  if (!non_sink.empty()) {
    const uint32_t cap = h.step_cap(n);
    for (uint32_t k = 0; k < h.episodes_per_graph; ++k) {
      uint32_t v = non_sink[rng.uniform_below(non_sink.size())];
      EpisodeResult ep;
      while (v != sink_idx) {
        if (ep.steps >= cap) {
          ep.truncated = true;
          break;
        }
        NodeAgent& actor = agents[v];
        if (actor.q_row.empty()) {
          ep.dead_end = true;
          break;
        }
        size_t pick = select_index(rng, h.epsilon, actor.q_row);
        uint32_t u = g.adjacency[v][pick];
        double r = (u == sink_idx) ? 100.0 : 0.0;

        double max_next;
        if (stale) {
          max_next = actor.neighbor_max_cache[pick];
        } else {
          // Pull one fresh summary from the chosen next hop.
          QSummaryMsg msg = agents[u].summary();
          result.messages += 1;
          emit_trace(options.trace, result.updates, agents[u], actor, msg.max_q);
          actor.neighbor_max_cache[pick] = msg.max_q;
          max_next = msg.max_q;
        }
        actor.q_row[pick] =
            bellman_mix(actor.q_row[pick], r, max_next, h.alpha, h.gamma);
        result.updates += 1;
        if (stale &&
            std::abs(row_max(actor.q_row) - actor.last_pushed_max) > threshold)
          push_summary(v);
        v = u;
        ++ep.steps;
      }
      ep.reached_sink = (v == sink_idx);
      result.stats.episodes += 1;
      result.stats.steps += ep.steps;
      result.stats.reached_sink += ep.reached_sink ? 1 : 0;
      result.stats.truncated += ep.truncated ? 1 : 0;
      result.stats.dead_ends += ep.dead_end ? 1 : 0;
    }
  }

  for (uint32_t i = 0; i < n; ++i)
    for (size_t k = 0; k < table_slots[i].size(); ++k)
      table.set_value_at(table_slots[i][k], agents[i].q_row[k]);
}

}  // namespace

DistResult run_distributed(std::span<const GraphInstance> graphs,
                           const Hyperparams& h, uint64_t seed,
                           const DistOptions& options) {
  validate_hyperparams(h);
  if (graphs.empty()) throw std::invalid_argument("run_distributed: no graphs");
  for (const auto& g : graphs) {
    if (!(g.params == graphs[0].params) || !(g.sink == graphs[0].sink))
      throw std::invalid_argument(
          "run_distributed: graphs disagree on grid params or sink");
  }
  DistResult result{QTable::init(graphs[0].params), {}, 0, 0};
  Rng rng(seed);
  for (const GraphInstance& g : graphs)
    run_deployment(g, h, rng, options, result.table, result);
  return result;
}

DistResult run_distributed(const GraphInstance& g, const Hyperparams& h,
                           uint64_t seed, const DistOptions& options) {
  return run_distributed(std::span<const GraphInstance>(&g, 1), h, seed, options);
}

}  // namespace qspt
