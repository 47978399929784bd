// End-to-end CLI: pipeline outputs, determinism, exit codes. Takes the qspt
// binary path as argv[1] and works inside a scratch directory.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "qspt/util.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using qspt::read_file;
using qspt::write_file;

namespace {

std::string g_binary;
fs::path g_root;

int run(const std::string& args) {
  std::string cmd = g_binary + " " + args + " >> " +
                    (g_root / "cli.log").string() + " 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

const char* kCommon =
    " --width 20 --range 6 --sink 10,10 --nodes 12 --graphs 2 --test-graphs 2"
    " --episodes 300 --seed 9";

void test_pipeline_and_determinism() {
  fs::path a = g_root / "a";
  fs::path b = g_root / "b";

  for (const fs::path& dir : {a, b}) {
    CHECK_EQ(run(std::string("gen") + kCommon + " --out " + dir.string()), 0);
    CHECK_EQ(run(std::string("train") + kCommon + " --out " + dir.string()), 0);
    CHECK_EQ(run(std::string("test") + kCommon + " --out " + dir.string() +
                 " --qtable " + (dir / "qtable_n12.qt").string()),
             0);
  }

  // Same seeds, different directories: byte-identical artifacts.
  for (const char* rel :
       {"corpus/train_n12_0.graph", "corpus/train_n12_1.graph",
        "corpus/test_n12_0.graph", "corpus/test_n12_1.graph",
        "corpus/manifest.txt", "qtable_n12.qt",
        "accuracy_train_n12_test_n12.csv"}) {
    CHECK(read_file((a / rel).string()) == read_file((b / rel).string()));
  }

  // CSV sanity: accuracy values within [0,1] and the mean row equal to the
  // arithmetic mean of the per-graph rows at full precision.
  std::string csv = read_file((a / "accuracy_train_n12_test_n12.csv").string());
  CHECK(csv.find("graph_id,n_nodes,accuracy,dead_ends") != std::string::npos);
  {
    std::vector<double> rows;
    double mean_row = -1.0;
    size_t pos = 0;
    while (pos < csv.size()) {
      size_t end = csv.find('\n', pos);
      if (end == std::string::npos) end = csv.size();
      std::string line = csv.substr(pos, end - pos);
      pos = end + 1;
      if (line.empty() || line[0] == '#' || line.rfind("graph_id", 0) == 0)
        continue;
      size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
      size_t c3 = line.find(',', c2 + 1);
      double acc = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
      CHECK(acc >= 0.0 && acc <= 1.0);
      if (line.rfind("mean,", 0) == 0)
        mean_row = acc;
      else
        rows.push_back(acc);
    }
    CHECK_EQ(rows.size(), 2u);
    double sum = 0.0;
    for (double r : rows) sum += r;
    CHECK_EQ(sum / static_cast<double>(rows.size()), mean_row);  // exact
  }

  // Tree files exist for each test graph.
  CHECK(fs::exists(a / "trees_train_n12_test_n12/test_n12_0.tree"));
  CHECK(fs::exists(a / "trees_train_n12_test_n12/test_n12_1.tree"));

  // Render both panels.
  CHECK_EQ(run("render --graph " + (a / "corpus/test_n12_0.graph").string() +
               " --tree " + (a / "trees_train_n12_test_n12/test_n12_0.tree").string() +
               " --out " + (a / "learned.svg").string()),
           0);
  CHECK_EQ(run("render --graph " + (a / "corpus/test_n12_0.graph").string() +
               " --oracle --out " + (a / "oracle.svg").string()),
           0);
  CHECK(read_file((a / "learned.svg").string()).rfind("<svg ", 0) == 0);
  CHECK(read_file((a / "oracle.svg").string()).rfind("<svg ", 0) == 0);

  // Report over the accuracy CSV.
  CHECK_EQ(run("report " + (a / "accuracy_train_n12_test_n12.csv").string() +
               " --out " + (a / "summary.csv").string()),
           0);
  std::string summary = read_file((a / "summary.csv").string());
  CHECK(summary.rfind("test_size,train_n12", 0) == 0);
}

void test_distributed_flag() {
  fs::path d = g_root / "dist";
  CHECK_EQ(run(std::string("gen") + kCommon + " --out " + d.string()), 0);
  CHECK_EQ(run(std::string("train") + kCommon + " --distributed --trace " +
               (d / "msgs.csv").string() + " --out " + d.string()),
           0);
  std::string log = read_file((d / "qtable_n12.log").string());
  CHECK(log.find("centralized_equivalence identical") != std::string::npos);

  // Centralized table from the deterministic sibling run matches.
  CHECK(read_file((d / "qtable_n12.qt").string()) ==
        read_file((g_root / "a" / "qtable_n12.qt").string()));

  // Message trace: one line per message, matching the logged count.
  std::string trace = read_file((d / "msgs.csv").string());
  size_t lines = 0;
  for (char c : trace)
    if (c == '\n') ++lines;
  size_t at = log.find("messages ");
  CHECK(at != std::string::npos);
  CHECK_EQ(std::stoull(log.substr(at + 9)), lines);
}

void test_full_scale_warning() {
  // A full-scale graph count triggers a runtime warning but still runs.
  fs::path w = g_root / "warn";
  CHECK_EQ(run("gen --width 10 --range 5 --sink 5,5 --nodes 2 --graphs 5000"
               " --test-graphs 0 --seed 1 --out " + w.string()),
           0);
  CHECK(read_file((g_root / "cli.log").string()).find("full-scale") !=
        std::string::npos);
  CHECK(fs::exists(w / "corpus/train_n2_4999.graph"));
}

void test_exit_codes() {
  CHECK_EQ(run("frobnicate"), 1);                       // unknown command
  CHECK_EQ(run("train --nodes 12"), 1);                 // missing corpus
  CHECK_EQ(run("gen --width 10 --range 3 --sink 5,5 --nodes 200 --out " +
               (g_root / "x").string()),
           1);                                          // n > W^2
  // Impossible connectivity exhausts the retry budget.
  CHECK_EQ(run("gen --width 20 --range 0.9 --sink 10,10 --nodes 2 --graphs 1"
               " --test-graphs 0 --out " + (g_root / "y").string()),
           2);
  // Corrupt q-table file.
  write_file((g_root / "bad.qt").string(), "W 20\nR 6\nversion 1\n0 1 0\n");
  CHECK_EQ(run(std::string("test") + kCommon + " --out " +
               (g_root / "a").string() + " --qtable " +
               (g_root / "bad.qt").string()),
           3);
  CHECK_EQ(run("help"), 0);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::printf("usage: test_cli <path-to-qspt-binary>\n");
    return 1;
  }
  g_binary = argv[1];
  g_root = fs::temp_directory_path() / "qspt_cli_test";
  fs::remove_all(g_root);
  fs::create_directories(g_root);

  test_pipeline_and_determinism();
  test_distributed_flag();
  test_full_scale_warning();
  test_exit_codes();

  int rc = testutil::summary("cli");
  if (rc == 0) fs::remove_all(g_root);
  return rc;
}
