// distributed.hpp — training as per-node agents over a simulated message layer.
//
// Each node owns only its own Q row. The one piece of non-local state a
// Bellman update needs — the max Q at the next hop — arrives as a one-value
// summary message from that neighbor, so every update costs exactly one
// message of constant size. No agent ever reads another agent's row
// directly.
//
// Two delivery modes:
//   pull-fresh (default): the summary is requested at update time. The
//     simulated link is lossless and ordered, so the distributed run computes
//     the same arithmetic sequence as the centralized trainer and the
//     assembled table is identical entry for entry under the same seed.
//   stale-cache: agents push their max to all neighbors only when it has
//     changed by more than a threshold since the last push; updates read the
//     local cache. Cheaper on messages, measurably less accurate — an
//     experimental toggle for exploring that trade.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qspt/qlearn.hpp"

namespace qspt {

struct QSummaryMsg {
  Location sender;
  double max_q = 0.0;  // max over the sender's row, 0 if the row is empty
};

struct NodeAgent {
  Location location;
  // Aligned to the node's graph adjacency (sorted by linear index):
  std::vector<Location> neighbors;
  std::vector<double> q_row;              // this agent's slice Q(v, .)
  std::vector<double> neighbor_max_cache; // last summary received per neighbor
  double last_pushed_max = 0.0;           // stale-cache bookkeeping

  QSummaryMsg summary() const;
};

// Applies one Bellman update to agent->q_row for the chosen neighbor u,
// with the max term supplied by u's summary. Returns the updated entry.
// Throws when u is not a neighbor or the summary's sender is not u.
double agent_update(NodeAgent& agent, Location u, double reward,
                    const QSummaryMsg& summary, double alpha, double gamma);

struct DistOptions {
  // Stale-cache push threshold; disengaged means pull-fresh.
  std::optional<double> stale_threshold;
  // Optional message trace: "step,sender_x,sender_y,receiver_x,receiver_y,max_q".
  std::ostream* trace = nullptr;
};

struct DistResult {
  QTable table;
  TrainStats stats;
  uint64_t updates = 0;
  uint64_t messages = 0;
};

// Runs the single-graph training schedule (same draw order as train()) with
// every Bellman max served by a summary message. In pull-fresh mode the
// assembled table equals the centralized result bit for bit.
DistResult run_distributed(const GraphInstance& g, const Hyperparams& h,
                           uint64_t seed, const DistOptions& options = {});

// Multi-graph form: agents redeploy per graph, each node carrying its row
// from the shared table between deployments, mirroring train() over the same
// corpus. Pull-fresh mode again matches the centralized result exactly.
DistResult run_distributed(std::span<const GraphInstance> graphs,
                           const Hyperparams& h, uint64_t seed,
                           const DistOptions& options = {});

}  // namespace qspt
