// qlearn.hpp — tabular Q-learning over network instances.
//
// Training threads ONE shared Q-table through every graph of the curriculum:
// the table is indexed by grid location, not by graph, so values learned on
// one instance carry over to the next and to unseen test graphs.
//
// Per-episode draw order (see rng.hpp): start node, then per step an explore
// coin, then either a uniform neighbor pick (explore) or a tie-break pick
// among maximizers (exploit, only when two or more tie). The Bellman max
// consumes no draws.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qspt/graph.hpp"
#include "qspt/qtable.hpp"
#include "qspt/rng.hpp"

namespace qspt {

struct Hyperparams {
  double alpha = 0.9;    // learning rate, (0, 1]
  double gamma = 0.9;    // discount factor, [0, 1)
  double epsilon = 0.5;  // exploration probability, [0, 1]
  uint32_t episodes_per_graph = 20000;  // K
  // Episode step cap; 0 selects the default of 10 * |V| per graph. Early
  // episodes are near-random walks, so an uncapped loop can run very long;
  // truncation just ends the episode, every update already happened in place.
  uint32_t max_steps_per_episode = 0;

  uint32_t step_cap(size_t n_nodes) const {
    return max_steps_per_episode > 0 ? max_steps_per_episode
                                     : static_cast<uint32_t>(10 * n_nodes);
  }
};

void validate_hyperparams(const Hyperparams& h);

// ---------------------------------------------------------------------------
// Decision kernels. The distributed runtime calls these same functions on the
// same operand sequences, which is what makes the two runtimes produce
// entry-wise identical tables for a given seed.
// ---------------------------------------------------------------------------

// Max over a Q row restricted to graph-specific neighbors; 0 for an empty
// row. Stored values are never negative, so starting at 0 is exact.
inline double row_max(std::span<const double> qvals) {
  double m = 0.0;
  for (double v : qvals)
    if (v > m) m = v;
  return m;
}

inline double bellman_mix(double q_old, double reward, double max_next,
                          double alpha, double gamma) {
  return (1.0 - alpha) * q_old + alpha * (reward + gamma * max_next);
}

// Epsilon-greedy pick over a candidate Q row; returns an index into qvals.
// Exploit ties are broken by a uniform draw among the maximizers.
size_t select_index(Rng& rng, double epsilon, std::span<const double> qvals);

// ---------------------------------------------------------------------------
// Core operations
// ---------------------------------------------------------------------------

// 100 when u is the sink, 0 for any other graph neighbor of v. Querying a
// non-neighbor pair is a contract violation.
double reward(Location v, Location u, const GraphInstance& g);

// One epsilon-greedy action from v over the graph-specific neighbor set.
Location select_action(Location v, const GraphInstance& g, const QTable& q,
                       double epsilon, Rng& rng);

// Q(v,u) <- (1-a) Q(v,u) + a (r + g * max_{u'} Q(u,u')), max over u's graph
// neighbors (0 if none). Returns the updated value; only (v,u) changes.
double bellman_update(QTable& q, Location v, Location u, double r,
                      const GraphInstance& g, double alpha, double gamma);

struct EpisodeResult {
  uint32_t steps = 0;
  bool reached_sink = false;
  bool truncated = false;  // step cap hit
  bool dead_end = false;   // no graph neighbors at the current node
};

// Walks from start until the sink, a dead end, or the step cap; the table is
// updated in place after every move. Dead ends and truncation are recorded
// outcomes, not errors.
EpisodeResult run_episode(const GraphInstance& g, QTable& q,
                          const Hyperparams& h, Location start, Rng& rng,
                          std::vector<uint32_t>* visit_counts = nullptr);

struct TrainProgress {
  uint64_t episodes_done = 0;
  uint64_t episodes_total = 0;
  double mean_steps_window = 0.0;  // mean episode length since last report
};

struct TrainOptions {
  // Invoked every 10^4 episodes and once at the end.
  std::function<void(const TrainProgress&)> progress;
  // Optional per-entry update counter, aligned to the table's value slots.
  // Resized by train(). Used by convergence checks.
  std::vector<uint32_t>* visit_counts = nullptr;
};

struct TrainStats {
  uint64_t episodes = 0;
  uint64_t steps = 0;
  uint64_t reached_sink = 0;
  uint64_t truncated = 0;
  uint64_t dead_ends = 0;
};

struct TrainResult {
  QTable table;
  TrainStats stats;
};

// Full training phase: K episodes on each graph in order, one shared table,
// episode starts drawn uniformly from the non-sink nodes. All graphs must
// share grid params and sink.
TrainResult train(std::span<const GraphInstance> graphs, const Hyperparams& h,
                  uint64_t seed, const TrainOptions& options = {});

}  // namespace qspt
