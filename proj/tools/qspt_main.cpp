// qspt — Q-learning shortest-path tree experiments.
//
// Subcommands: gen, train, test, render, report. Exit codes: 0 success,
// 1 usage/config error, 2 generation failure, 3 data-format error.

#include <iostream>
#include <string>
#include <vector>

#include "qspt/experiment.hpp"

using namespace qspt;

namespace {

const char* kUsage = R"(usage: qspt <command> [options]

commands:
  gen      generate a graph corpus (train + test files and a manifest)
  train    train a Q-table on the corpus slice for one node count
  test     build trees on a test slice and score them against BFS layers
  render   draw a graph with a learned tree (or --oracle) as SVG
  report   aggregate accuracy CSVs into one train-size x test-size table

common options:
  --config FILE      flat key=value config; flags override file values
  --out DIR          output directory (default: out)
  --seed S           sets both corpus_seed and train_seed
  --nodes LIST       node counts, e.g. 100,200,300 (train/test take one value)
  --graphs M         training graphs per node count
  --test-graphs T    test graphs per node count
  --episodes K       episodes per graph
  --alpha A --gamma G --epsilon E
  --width W --range R --sink X,Y

train options:
  --distributed      run the per-node message-passing runtime; in pull-fresh
                     mode the log asserts equality with the centralized table
  --stale-cache THR  distributed summary pushes only on max-Q change > THR
  --trace FILE       write the distributed message trace as CSV

test options:
  --qtable FILE      trained table to evaluate
  --label NAME       train label for reports (default: table filename stem)

render options:
  --graph FILE       graph file
  --tree FILE        tree file produced by `test`
  --oracle           render the BFS tree instead of a learned tree
)";

struct Args {
  std::string command;
  std::vector<std::string> positional;
  std::vector<std::pair<std::string, std::string>> flags;  // name -> value
};

bool flag_takes_value(const std::string& name) {
  static const char* kBool[] = {"distributed", "oracle", "help"};
  for (const char* b : kBool)
    if (name == b) return false;
  return true;
}

Args parse_args(int argc, char** argv) {
  Args args;
  if (argc < 2) throw std::invalid_argument("missing command");
  args.command = argv[1];
  for (int i = 2; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0) {
      args.positional.push_back(arg);
      continue;
    }
    std::string name = arg.substr(2), value;
    if (auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else if (flag_takes_value(name)) {
      if (i + 1 >= argc)
        throw std::invalid_argument("flag --" + name + " needs a value");
      value = argv[++i];
    }
    args.flags.emplace_back(name, value);
  }
  return args;
}

ExperimentConfig build_config(const Args& args) {
  ExperimentConfig cfg;
  // First pass: config file only, so later flags override it.
  for (const auto& [name, value] : args.flags)
    if (name == "config") cfg = parse_config_file(value, cfg);

  for (const auto& [name, value] : args.flags) {
    if (name == "config") continue;
    if (name == "out") cfg.out_dir = value;
    else if (name == "seed") {
      uint64_t s = static_cast<uint64_t>(parse_int(value, "seed"));
      cfg.corpus_seed = s;
      cfg.train_seed = s;
    } else if (name == "corpus-seed")
      cfg.corpus_seed = static_cast<uint64_t>(parse_int(value, "corpus-seed"));
    else if (name == "train-seed")
      cfg.train_seed = static_cast<uint64_t>(parse_int(value, "train-seed"));
    else if (name == "nodes") {
      cfg.node_counts.clear();
      size_t start = 0;
      while (start <= value.size()) {
        size_t comma = value.find(',', start);
        if (comma == std::string::npos) comma = value.size();
        if (comma > start)
          cfg.node_counts.push_back(static_cast<uint32_t>(
              parse_int(std::string_view(value).substr(start, comma - start),
                        "nodes")));
        start = comma + 1;
      }
      if (cfg.node_counts.empty())
        throw std::invalid_argument("--nodes: empty list");
    } else if (name == "graphs")
      cfg.train_graphs = static_cast<uint32_t>(parse_int(value, "graphs"));
    else if (name == "test-graphs")
      cfg.test_graphs = static_cast<uint32_t>(parse_int(value, "test-graphs"));
    else if (name == "episodes")
      cfg.hyper.episodes_per_graph =
          static_cast<uint32_t>(parse_int(value, "episodes"));
    else if (name == "max-steps")
      cfg.hyper.max_steps_per_episode =
          static_cast<uint32_t>(parse_int(value, "max-steps"));
    else if (name == "alpha")
      cfg.hyper.alpha = parse_double(value, "alpha");
    else if (name == "gamma")
      cfg.hyper.gamma = parse_double(value, "gamma");
    else if (name == "epsilon")
      cfg.hyper.epsilon = parse_double(value, "epsilon");
    else if (name == "width")
      cfg.grid.width = static_cast<int32_t>(parse_int(value, "width"));
    else if (name == "range")
      cfg.grid.range = parse_double(value, "range");
    else if (name == "sink") {
      auto comma = value.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("--sink expects X,Y");
      cfg.sink.x = static_cast<int32_t>(
          parse_int(std::string_view(value).substr(0, comma), "sink"));
      cfg.sink.y = static_cast<int32_t>(
          parse_int(std::string_view(value).substr(comma + 1), "sink"));
    } else if (name == "distributed")
      cfg.distributed = true;
    else if (name == "stale-cache") {
      cfg.distributed = true;
      cfg.stale_threshold = value.empty() ? 0.0 : parse_double(value, "stale-cache");
    } else if (name == "trace")
      cfg.trace_path = value;
    else if (name == "qtable" || name == "label" || name == "graph" ||
               name == "tree" || name == "oracle" || name == "help") {
      // command-specific, handled by the caller
    } else
      throw std::invalid_argument("unknown flag --" + name);
  }
  return cfg;
}

std::string flag_value(const Args& args, const std::string& name,
                       const std::string& fallback = "") {
  for (const auto& [n, v] : args.flags)
    if (n == name) return v;
  return fallback;
}

bool has_flag(const Args& args, const std::string& name) {
  for (const auto& [n, v] : args.flags)
    if (n == name) return true;
  return false;
}

uint32_t single_node_count(const ExperimentConfig& cfg, const char* what) {
  if (cfg.node_counts.size() != 1)
    throw std::invalid_argument(std::string(what) +
                                " needs exactly one --nodes value");
  return cfg.node_counts[0];
}

int run(int argc, char** argv) {
  Args args = parse_args(argc, argv);
  if (args.command == "help" || args.command == "--help" ||
      has_flag(args, "help")) {
    std::cout << kUsage;
    return 0;
  }

  if (args.command == "gen") {
    cmd_gen(build_config(args));
  } else if (args.command == "train") {
    ExperimentConfig cfg = build_config(args);
    uint32_t n = single_node_count(cfg, "train");
    std::string path = cmd_train(cfg, n);
    std::cout << path << "\n";
  } else if (args.command == "test") {
    ExperimentConfig cfg = build_config(args);
    uint32_t n = single_node_count(cfg, "test");
    std::string qtable = flag_value(args, "qtable");
    if (qtable.empty()) throw std::invalid_argument("test needs --qtable");
    std::string label = flag_value(args, "label");
    if (label.empty()) {
      label = qtable;
      if (auto slash = label.find_last_of('/'); slash != std::string::npos)
        label = label.substr(slash + 1);
      if (auto dot = label.find_last_of('.'); dot != std::string::npos)
        label = label.substr(0, dot);
      if (label.rfind("qtable_", 0) == 0) label = label.substr(7);
    }
    std::cout << cmd_test(cfg, qtable, n, label) << "\n";
  } else if (args.command == "render") {
    std::string graph = flag_value(args, "graph");
    std::string tree = flag_value(args, "tree");
    std::string out = flag_value(args, "out", "tree.svg");
    bool oracle = has_flag(args, "oracle");
    if (graph.empty() || (tree.empty() && !oracle))
      throw std::invalid_argument("render needs --graph and --tree or --oracle");
    cmd_render(graph, tree, oracle, out);
  } else if (args.command == "report") {
    std::string out = flag_value(args, "out", "report.csv");
    if (args.positional.empty())
      throw std::invalid_argument("report needs accuracy CSV paths");
    cmd_report(args.positional, out);
  } else {
    throw std::invalid_argument("unknown command: " + args.command);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const GenerationError& e) {
    std::cerr << "generation error: " << e.what() << " (attempts: "
              << e.attempts << ")\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "data format error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n" << kUsage;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
