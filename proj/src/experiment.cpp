#include "qspt/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "qspt/distributed.hpp"
#include "qspt/oracle.hpp"
#include "qspt/qtable.hpp"
#include "qspt/spt.hpp"
#include "qspt/svg.hpp"

namespace fs = std::filesystem;

namespace qspt {

namespace {

std::vector<uint32_t> parse_node_list(std::string_view s) {
  std::vector<uint32_t> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    auto item = s.substr(start, comma - start);
    if (!item.empty())
      out.push_back(static_cast<uint32_t>(parse_int(item, "nodes")));
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("nodes: empty list");
  return out;
}

std::string node_list_str(const std::vector<uint32_t>& counts) {
  std::string s;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(counts[i]);
  }
  return s;
}

void warn_if_full_scale(const ExperimentConfig& cfg) {
  if (cfg.train_graphs >= 5000 || cfg.hyper.episodes_per_graph >= 500000)
    std::cerr << "warning: full-scale configuration ("
              << cfg.train_graphs << " graphs x "
              << cfg.hyper.episodes_per_graph
              << " episodes); expect a very long run\n";
}

std::vector<std::string> config_echo(const ExperimentConfig& cfg) {
  return {
      "width " + std::to_string(cfg.grid.width),
      "range " + fmt_double(cfg.grid.range),
      "sink " + std::to_string(cfg.sink.x) + " " + std::to_string(cfg.sink.y),
      "train_graphs " + std::to_string(cfg.train_graphs),
      "test_graphs " + std::to_string(cfg.test_graphs),
      "episodes " + std::to_string(cfg.hyper.episodes_per_graph),
      "alpha " + fmt_double(cfg.hyper.alpha),
      "gamma " + fmt_double(cfg.hyper.gamma),
      "epsilon " + fmt_double(cfg.hyper.epsilon),
      "corpus_seed " + std::to_string(cfg.corpus_seed),
      "train_seed " + std::to_string(cfg.train_seed),
  };
}

std::vector<GraphInstance> load_corpus_slice(const ExperimentConfig& cfg,
                                             uint32_t n_nodes, bool test,
                                             uint32_t count) {
  std::vector<GraphInstance> graphs(count);
  const std::string dir = corpus_dir(cfg);
  parallel_for_indexed(count, [&](size_t i) {
    const std::string path =
        dir + "/" + graph_filename(n_nodes, test, static_cast<uint32_t>(i));
    graphs[i] = parse_graph(read_file(path));
  });
  return graphs;
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path,
                                   ExperimentConfig base) {
  const std::string text = read_file(path);
  for_each_line(text, [&](std::string_view line) {
    size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    // key=value, with key value also accepted
    std::string norm(line);
    std::replace(norm.begin(), norm.end(), '=', ' ');
    auto tokens = split_ws(norm);
    if (tokens.empty()) return;
    if (tokens.size() != 2)
      throw std::invalid_argument("config line must be key=value: " +
                                  std::string(line));
    const std::string key(tokens[0]);
    const std::string_view val = tokens[1];
    if (key == "width")
      base.grid.width = static_cast<int32_t>(parse_int(val, "width"));
    else if (key == "range")
      base.grid.range = parse_double(val, "range");
    else if (key == "sink_x")
      base.sink.x = static_cast<int32_t>(parse_int(val, "sink_x"));
    else if (key == "sink_y")
      base.sink.y = static_cast<int32_t>(parse_int(val, "sink_y"));
    else if (key == "nodes")
      base.node_counts = parse_node_list(val);
    else if (key == "train_graphs")
      base.train_graphs = static_cast<uint32_t>(parse_int(val, "train_graphs"));
    else if (key == "test_graphs")
      base.test_graphs = static_cast<uint32_t>(parse_int(val, "test_graphs"));
    else if (key == "episodes")
      base.hyper.episodes_per_graph =
          static_cast<uint32_t>(parse_int(val, "episodes"));
    else if (key == "max_steps")
      base.hyper.max_steps_per_episode =
          static_cast<uint32_t>(parse_int(val, "max_steps"));
    else if (key == "alpha")
      base.hyper.alpha = parse_double(val, "alpha");
    else if (key == "gamma")
      base.hyper.gamma = parse_double(val, "gamma");
    else if (key == "epsilon")
      base.hyper.epsilon = parse_double(val, "epsilon");
    else if (key == "corpus_seed")
      base.corpus_seed = static_cast<uint64_t>(parse_int(val, "corpus_seed"));
    else if (key == "train_seed")
      base.train_seed = static_cast<uint64_t>(parse_int(val, "train_seed"));
    else if (key == "out")
      base.out_dir = std::string(val);
    else if (key == "stale_cache")
      base.stale_threshold = parse_double(val, "stale_cache");
    else if (key == "distributed")
      base.distributed = parse_int(val, "distributed") != 0;
    else if (key == "trace")
      base.trace_path = std::string(val);
    else
      throw std::invalid_argument("unknown config key: " + key);
  });
  return base;
}

std::string corpus_dir(const ExperimentConfig& cfg) {
  return cfg.out_dir + "/corpus";
}

std::string graph_filename(uint32_t n_nodes, bool test, uint32_t index) {
  return std::string(test ? "test" : "train") + "_n" + std::to_string(n_nodes) +
         "_" + std::to_string(index) + ".graph";
}

uint64_t graph_seed(const ExperimentConfig& cfg, uint32_t n_nodes, bool test,
                    uint32_t index) {
  uint64_t stream = derive_seed(cfg.corpus_seed, n_nodes);
  return derive_seed(stream, (test ? (1ull << 32) : 0ull) + index);
}

void cmd_gen(const ExperimentConfig& cfg) {
  validate_params(cfg.grid);
  if (!in_bounds(cfg.sink, cfg.grid))
    throw std::invalid_argument("sink outside grid");
  const uint64_t capacity = static_cast<uint64_t>(cfg.grid.width) *
                            static_cast<uint64_t>(cfg.grid.width);
  for (uint32_t n : cfg.node_counts)
    if (n == 0 || n > capacity)
      throw std::invalid_argument("node count " + std::to_string(n) +
                                  " exceeds grid capacity W^2");
  warn_if_full_scale(cfg);

  const std::string dir = corpus_dir(cfg);
  fs::create_directories(dir);

  struct Job {
    uint32_t n;
    bool test;
    uint32_t index;
  };
  std::vector<Job> jobs;
  for (uint32_t n : cfg.node_counts) {
    for (uint32_t i = 0; i < cfg.train_graphs; ++i) jobs.push_back({n, false, i});
    for (uint32_t i = 0; i < cfg.test_graphs; ++i) jobs.push_back({n, true, i});
  }

  std::vector<std::string> manifest_rows(jobs.size());
  parallel_for_indexed(jobs.size(), [&](size_t j) {
    const Job& job = jobs[j];
    const uint64_t seed = graph_seed(cfg, job.n, job.test, job.index);
    GraphInstance g = generate_graph(cfg.grid, job.n, cfg.sink, seed);
    const std::string body = serialize_graph(g);
    const std::string name = graph_filename(job.n, job.test, job.index);
    write_file(dir + "/" + name, body);
    char checksum[17];
    snprintf(checksum, sizeof(checksum), "%016llx",
             static_cast<unsigned long long>(fnv1a64(body)));
    manifest_rows[j] = "file " + name + " seed " + std::to_string(seed) +
                       " checksum " + checksum;
  });

  std::string manifest;
  for (const auto& line : config_echo(cfg)) manifest += line + "\n";
  manifest += "nodes " + node_list_str(cfg.node_counts) + "\n";
  for (const auto& row : manifest_rows) manifest += row + "\n";
  write_file(dir + "/manifest.txt", manifest);
}

std::string cmd_train(const ExperimentConfig& cfg, uint32_t n_nodes) {
  validate_hyperparams(cfg.hyper);
  warn_if_full_scale(cfg);
  auto graphs = load_corpus_slice(cfg, n_nodes, false, cfg.train_graphs);

  const std::string table_path =
      cfg.out_dir + "/qtable_n" + std::to_string(n_nodes) + ".qt";
  const std::string log_path =
      cfg.out_dir + "/qtable_n" + std::to_string(n_nodes) + ".log";
  fs::create_directories(cfg.out_dir);

  std::ostringstream log;
  for (const auto& line : config_echo(cfg)) log << "# " << line << "\n";
  log << "# train_n " << n_nodes << "\n";

  const auto t0 = std::chrono::steady_clock::now();
  QTable table = QTable::init(cfg.grid);
  TrainStats stats;

  if (cfg.distributed) {
    DistOptions dopt;
    dopt.stale_threshold = cfg.stale_threshold;
    std::ofstream trace;
    if (!cfg.trace_path.empty()) {
      trace.open(cfg.trace_path, std::ios::binary);
      if (!trace)
        throw std::runtime_error("cannot open for writing: " + cfg.trace_path);
      dopt.trace = &trace;
    }
    DistResult dist = run_distributed(std::span<const GraphInstance>(graphs),
                                      cfg.hyper, cfg.train_seed, dopt);
    log << "mode distributed"
        << (cfg.stale_threshold ? " stale-cache" : " pull-fresh") << "\n";
    log << "messages " << dist.messages << "\n";
    log << "updates " << dist.updates << "\n";
    if (!cfg.stale_threshold) {
      // Pull-fresh must reproduce the centralized table exactly.
      TrainResult central = train(graphs, cfg.hyper, cfg.train_seed);
      log << "centralized_equivalence "
          << (central.table == dist.table ? "identical" : "MISMATCH") << "\n";
      if (!(central.table == dist.table))
        throw std::runtime_error(
            "distributed training diverged from the centralized result");
    }
    table = std::move(dist.table);
    stats = dist.stats;
  } else {
    TrainOptions topt;
    topt.progress = [&](const TrainProgress& p) {
      log << "progress episodes " << p.episodes_done << "/" << p.episodes_total
          << " mean_steps " << fmt_double(p.mean_steps_window) << "\n";
    };
    TrainResult result = train(graphs, cfg.hyper, cfg.train_seed, topt);
    table = std::move(result.table);
    stats = result.stats;
  }

  const auto t1 = std::chrono::steady_clock::now();
  log << "episodes " << stats.episodes << "\n";
  log << "steps " << stats.steps << "\n";
  log << "reached_sink " << stats.reached_sink << "\n";
  log << "truncated " << stats.truncated << "\n";
  log << "wall_seconds "
      << std::chrono::duration<double>(t1 - t0).count() << "\n";

  save_qtable_file(table, table_path);
  write_file(log_path, log.str());
  return table_path;
}

std::string cmd_test(const ExperimentConfig& cfg, const std::string& qtable_path,
                     uint32_t test_n, const std::string& train_label) {
  QTable table = load_qtable_file(qtable_path);
  if (!(table.params() == cfg.grid))
    throw std::invalid_argument(
        "q-table grid params do not match the configured corpus");
  auto graphs = load_corpus_slice(cfg, test_n, true, cfg.test_graphs);
  for (const auto& g : graphs)
    if (!(g.sink == cfg.sink))
      throw std::invalid_argument("corpus sink does not match configuration");

  const std::string tag =
      "train_" + train_label + "_test_n" + std::to_string(test_n);
  const std::string tree_dir = cfg.out_dir + "/trees_" + tag;
  fs::create_directories(tree_dir);

  AccuracyReport report;
  report.per_graph.resize(graphs.size());
  std::vector<std::string> tree_bodies(graphs.size());
  parallel_for_indexed(graphs.size(), [&](size_t i) {
    const GraphInstance& g = graphs[i];
    RoutingTree tree = build_tree(g, table);
    auto labels = bfs_layers(g);
    AccuracyRow row;
    row.graph_id = static_cast<uint32_t>(i);
    row.n_nodes = static_cast<uint32_t>(g.node_count());
    row.accuracy = routing_accuracy(tree, labels);
    row.dead_ends = static_cast<uint32_t>(
        std::count(tree.failed.begin(), tree.failed.end(), uint8_t{1}));
    report.per_graph[i] = row;
    tree_bodies[i] = serialize_tree(tree);
  });
  for (size_t i = 0; i < graphs.size(); ++i)
    write_file(tree_dir + "/test_n" + std::to_string(test_n) + "_" +
                   std::to_string(i) + ".tree",
               tree_bodies[i]);

  report.finalize();
  auto comments = config_echo(cfg);
  comments.push_back("train_label " + train_label);
  comments.push_back("test_n " + std::to_string(test_n));
  comments.push_back("qtable " + fs::path(qtable_path).filename().string());
  comments.push_back("pooled_accuracy " + fmt_double(report.pooled_accuracy));
  comments.push_back("stddev_accuracy " + fmt_double(report.stddev_accuracy));

  const std::string csv_path = cfg.out_dir + "/accuracy_" + tag + ".csv";
  write_file(csv_path, accuracy_report_csv(report, comments));
  return csv_path;
}

void cmd_render(const std::string& graph_path, const std::string& tree_path,
                bool oracle, const std::string& out_path) {
  GraphInstance g = parse_graph(read_file(graph_path));
  RoutingTree tree;
  std::vector<int32_t> layers;
  SvgOptions options;
  if (oracle) {
    layers = bfs_layers(g);
    tree.graph = &g;
    tree.parent.assign(g.node_count(), kNoParent);
    tree.predicted_layers = layers;
    tree.failed.assign(g.node_count(), 0);
    // BFS parent map: discovery order over sorted adjacency, deterministic.
    const uint32_t sink = g.sink_node();
    for (uint32_t v = 0; v < g.node_count(); ++v) {
      if (v == sink) continue;
      for (uint32_t u : g.adjacency[v]) {
        if (layers[u] == layers[v] - 1) {
          tree.parent[v] = static_cast<int32_t>(u);
          break;
        }
      }
    }
    options.title = fs::path(graph_path).filename().string() + " (oracle)";
  } else {
    tree = parse_tree(read_file(tree_path), g);
    layers = tree.predicted_layers;
    options.title = fs::path(graph_path).filename().string() + " (learned)";
  }
  write_file(out_path, render_svg(g, tree, layers, options));
}

void cmd_report(const std::vector<std::string>& csv_paths,
                const std::string& out_path) {
  if (csv_paths.empty()) throw std::invalid_argument("report: no input CSVs");
  // (train label, test size) -> mean accuracy
  std::map<std::string, std::map<uint32_t, double>> cells;
  std::set<uint32_t> test_sizes;
  for (const auto& path : csv_paths) {
    const std::string text = read_file(path);
    std::string train_label;
    uint32_t test_n = 0;
    double mean = -1.0;
    for_each_line(text, [&](std::string_view line) {
      if (line.starts_with("# train_label "))
        train_label = std::string(line.substr(14));
      else if (line.starts_with("# test_n "))
        test_n = static_cast<uint32_t>(parse_int(line.substr(9), "test_n"));
      else if (line.starts_with("mean,")) {
        // mean,,<accuracy>,<dead_ends>
        std::vector<std::string_view> fields;
        size_t start = 0;
        while (start <= line.size()) {
          size_t comma = line.find(',', start);
          if (comma == std::string_view::npos) comma = line.size();
          fields.push_back(line.substr(start, comma - start));
          start = comma + 1;
        }
        if (fields.size() != 4) throw ParseError("malformed mean row: " + path);
        mean = parse_double(fields[2], "mean accuracy");
      }
    });
    if (train_label.empty() || test_n == 0 || mean < 0)
      throw ParseError("accuracy CSV missing train_label/test_n/mean: " + path);
    cells[train_label][test_n] = mean;
    test_sizes.insert(test_n);
  }

  std::string out = "test_size";
  for (const auto& [label, _] : cells) out += ",train_" + label;
  out += "\n";
  for (uint32_t n : test_sizes) {
    out += std::to_string(n);
    for (const auto& [label, row] : cells) {
      auto it = row.find(n);
      out += ",";
      out += (it == row.end()) ? "" : fmt_double(it->second);
    }
    out += "\n";
  }
  write_file(out_path, out);
}

}  // namespace qspt
