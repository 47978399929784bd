// File formats: Q-table save/load, round-trip identity across artifact
// kinds, and byte determinism.

#include <sstream>

#include "qspt/qlearn.hpp"
#include "qspt/spt.hpp"
#include "test_util.hpp"

using namespace qspt;

namespace {

std::string qtable_to_string(const QTable& q) {
  std::ostringstream out;
  save_qtable(q, out);
  return out.str();
}

QTable qtable_from_string(const std::string& s) {
  std::istringstream in(s);
  return load_qtable(in);
}

void test_qtable_roundtrip() {
  GridParams p{15, 3.0};
  GraphInstance g = generate_graph(p, 10, {7, 7}, 21);
  Hyperparams h;
  h.episodes_per_graph = 500;
  QTable trained = train(std::span<const GraphInstance>(&g, 1), h, 6).table;

  std::string bytes = qtable_to_string(trained);
  QTable back = qtable_from_string(bytes);
  CHECK(back == trained);  // exact doubles via shortest round-trip decimals
  CHECK_EQ(qtable_to_string(back), bytes);

  // Header sanity.
  CHECK(bytes.rfind("W 15\nR 3\nversion 1\n", 0) == 0);
}

void test_qtable_load_rejects_bad_input() {
  GridParams p{6, 1.5};
  QTable q = QTable::init(p);
  std::string good = qtable_to_string(q);

  // Truncated: one record missing.
  std::string missing = good.substr(0, good.rfind("\n", good.size() - 2) + 1);
  CHECK_THROWS(qtable_from_string(missing), ParseError);

  // Extra record for a non-neighbor pair.
  CHECK_THROWS(qtable_from_string(good + "0 35 1.5\n"), ParseError);

  // Duplicate record.
  std::string first_record = good.substr(good.find("version 1\n") + 10);
  first_record = first_record.substr(0, first_record.find('\n') + 1);
  CHECK_THROWS(qtable_from_string(good + first_record), ParseError);

  // Bad headers.
  CHECK_THROWS(qtable_from_string("W 6\nR 1.5\nversion 2\n"), ParseError);
  CHECK_THROWS(qtable_from_string("W 6\n"), ParseError);
  CHECK_THROWS(qtable_from_string("R 1.5\nW 6\nversion 1\n"), ParseError);

  // Malformed record.
  CHECK_THROWS(qtable_from_string("W 6\nR 1.5\nversion 1\n0 1 x\n"), ParseError);
}

void test_full_precision_values() {
  GridParams p{6, 1.5};
  QTable q = QTable::init(p);
  // Values with no short decimal representation survive exactly.
  q.set_value_at(q.slot(loc_index({2, 2}, p), loc_index({2, 3}, p)),
                 100.0 / 3.0);
  q.set_value_at(q.slot(loc_index({2, 2}, p), loc_index({3, 2}, p)),
                 0.1 + 0.2);
  QTable back = qtable_from_string(qtable_to_string(q));
  CHECK(back == q);
}

void test_random_artifact_roundtrips() {
  // Graphs, tables, and trees all satisfy parse(serialize(x)) == x. Sparse
  // parameter draws occasionally cannot connect; those are skipped.
  int done = 0;
  for (uint64_t seed = 0; done < 25; ++seed) {
    GridParams p{20, 4.0 + (seed % 5)};
    GraphInstance g;
    try {
      g = generate_graph(p, 10 + seed % 10, {10, 10}, 400 + seed);
    } catch (const GenerationError&) {
      continue;
    }
    ++done;
    CHECK(serialize_graph(parse_graph(serialize_graph(g))) ==
          serialize_graph(g));

    Hyperparams h;
    h.episodes_per_graph = 100;
    QTable t = train(std::span<const GraphInstance>(&g, 1), h, seed).table;
    std::string bytes = qtable_to_string(t);
    CHECK(qtable_to_string(qtable_from_string(bytes)) == bytes);

    RoutingTree tree = build_tree(g, t);
    std::string tb = serialize_tree(tree);
    CHECK(serialize_tree(parse_tree(tb, g)) == tb);
  }
}

}  // namespace

int main() {
  test_qtable_roundtrip();
  test_qtable_load_rejects_bad_input();
  test_full_precision_values();
  test_random_artifact_roundtrips();
  return testutil::summary("formats");
}
