// experiment.hpp — the experiment pipeline behind the CLI.
//
// gen:    write a corpus of train/test graph files per node count, with a
//         manifest of seeds and checksums.
// train:  run the training phase over a corpus slice, write the Q-table and
//         a log; optionally route through the distributed runtime.
// test:   build a tree per test graph, score against BFS, write the
//         accuracy CSV and tree files.
// render: draw a graph plus a learned or oracle tree as SVG.
// report: fold several accuracy CSVs into one train-size x test-size table.
//
// All outputs are deterministic functions of the effective configuration,
// which is echoed into every artifact as comment/header lines.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qspt/graph.hpp"
#include "qspt/qlearn.hpp"

namespace qspt {

struct ExperimentConfig {
  GridParams grid{100, 20.0};
  Location sink{50, 50};
  std::vector<uint32_t> node_counts{100, 200, 300, 400, 500};
  uint32_t train_graphs = 50;  // per node count; the full-scale value is 5000
  uint32_t test_graphs = 20;   // per node count; the full-scale value is 100
  Hyperparams hyper;           // episodes_per_graph 20000; full-scale 500000
  uint64_t corpus_seed = 1;
  uint64_t train_seed = 1;
  std::string out_dir = "out";
  bool distributed = false;
  std::optional<double> stale_threshold;
  std::string trace_path;  // distributed message trace, empty = off
};

// Flat key=value lines; '#' starts a comment. Unknown keys are an error.
ExperimentConfig parse_config_file(const std::string& path,
                                   ExperimentConfig base = {});

std::string corpus_dir(const ExperimentConfig& cfg);
std::string graph_filename(uint32_t n_nodes, bool test, uint32_t index);
uint64_t graph_seed(const ExperimentConfig& cfg, uint32_t n_nodes, bool test,
                    uint32_t index);

void cmd_gen(const ExperimentConfig& cfg);

// Returns the Q-table path. Trains on the corpus slice for n_nodes.
std::string cmd_train(const ExperimentConfig& cfg, uint32_t n_nodes);

// Tests qtable_path against the test slice for test_n. train_label names the
// table in outputs (normally "n<size>"). Returns the CSV path.
std::string cmd_test(const ExperimentConfig& cfg, const std::string& qtable_path,
                     uint32_t test_n, const std::string& train_label);

// tree_path empty + oracle=true renders the BFS tree instead.
void cmd_render(const std::string& graph_path, const std::string& tree_path,
                bool oracle, const std::string& out_path);

void cmd_report(const std::vector<std::string>& csv_paths,
                const std::string& out_path);

}  // namespace qspt
