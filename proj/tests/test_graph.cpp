// Topology: generation, connectivity, serialization.

#include "qspt/graph.hpp"

#include <set>

#include "test_util.hpp"

using namespace qspt;

namespace {

void test_generate_default_params() {
  GridParams p{100, 20.0};
  GraphInstance g = generate_graph(p, 100, {50, 50}, 7);
  CHECK_EQ(g.node_count(), 100u);
  CHECK(g.find_node({50, 50}).has_value());
  CHECK(is_connected_to_sink(g).connected);
  validate_instance(g);  // must not throw

  // Stored adjacency equals a from-scratch recompute.
  CHECK(g.adjacency == build_adjacency(g.nodes, p));

  // Distinct coordinates.
  std::set<Location> coords(g.nodes.begin(), g.nodes.end());
  CHECK_EQ(coords.size(), g.node_count());
}

void test_generate_singleton() {
  GraphInstance g = generate_graph(GridParams{10, 3.0}, 1, {5, 5}, 1);
  CHECK_EQ(g.node_count(), 1u);
  auto reach = is_connected_to_sink(g);
  CHECK(reach.connected);
  CHECK(reach.unreachable.empty());
}

void test_generate_complete_graph() {
  // R=141 on W=100: the far corners sit at distance ~140.01, so every pair
  // is adjacent. Verify against pairwise enumeration.
  GraphInstance g = generate_graph(GridParams{100, 141.0}, 10, {50, 50}, 3);
  CHECK_EQ(g.node_count(), 10u);
  for (size_t i = 0; i < g.node_count(); ++i) {
    CHECK_EQ(g.adjacency[i].size(), 9u);
    for (size_t j = 0; j < g.node_count(); ++j)
      if (i != j) CHECK(within_range(g.nodes[i], g.nodes[j], g.params));
  }
}

void test_generate_errors() {
  CHECK_THROWS(generate_graph(GridParams{10, 3.0}, 101, {5, 5}, 1),
               std::invalid_argument);
  CHECK_THROWS(generate_graph(GridParams{10, 3.0}, 10, {10, 5}, 1),
               std::invalid_argument);
  // Sub-unit range admits no edges at all, so a 2-node graph can never
  // connect and the retry budget trips.
  try {
    generate_graph(GridParams{100, 0.9}, 2, {50, 50}, 1);
    CHECK(false);
  } catch (const GenerationError& e) {
    CHECK_EQ(e.attempts, 1000);
  }
}

void test_disconnected_pair_reported() {
  GraphInstance g;
  g.params = GridParams{100, 5.0};
  g.sink = {0, 0};
  g.nodes = {{0, 0}, {90, 90}};
  g.adjacency = build_adjacency(g.nodes, g.params);
  auto reach = is_connected_to_sink(g);
  CHECK(!reach.connected);
  CHECK_EQ(reach.unreachable.size(), 1u);
  CHECK(reach.unreachable[0] == (Location{90, 90}));
}

void test_roundtrip_and_determinism() {
  GridParams p{50, 9.0};
  GraphInstance g = generate_graph(p, 40, {25, 25}, 99);
  std::string bytes = serialize_graph(g);
  GraphInstance back = parse_graph(bytes);
  CHECK(back.nodes == g.nodes);
  CHECK(back.adjacency == g.adjacency);
  CHECK(back.sink == g.sink);
  CHECK_EQ(serialize_graph(back), bytes);

  // Same seed, same bytes; different seed, different graph.
  CHECK_EQ(serialize_graph(generate_graph(p, 40, {25, 25}, 99)), bytes);
  CHECK(serialize_graph(generate_graph(p, 40, {25, 25}, 100)) != bytes);
}

void test_parse_rejects_bad_input() {
  GraphInstance g = generate_graph(GridParams{20, 5.0}, 8, {10, 10}, 5);
  std::string good = serialize_graph(g);

  CHECK_THROWS(parse_graph("W 20\nR 5\n"), ParseError);
  CHECK_THROWS(parse_graph("X 20\n" + good.substr(good.find('\n') + 1)),
               ParseError);

  // Duplicate coordinates.
  std::string dup = "W 20\nR 5\nsink_x 10\nsink_y 10\nn 3\n10 10\n4 4\n4 4\n";
  CHECK_THROWS(parse_graph(dup), ParseError);

  // Sink missing from the node list.
  std::string nosink = "W 20\nR 5\nsink_x 10\nsink_y 10\nn 2\n4 4\n4 5\n";
  CHECK_THROWS(parse_graph(nosink), ParseError);

  // Node out of bounds.
  std::string oob = "W 20\nR 5\nsink_x 10\nsink_y 10\nn 2\n10 10\n25 3\n";
  CHECK_THROWS(parse_graph(oob), ParseError);

  // Disconnected node.
  std::string disc = "W 20\nR 2\nsink_x 10\nsink_y 10\nn 2\n1 1\n10 10\n";
  CHECK_THROWS(parse_graph(disc), ParseError);

  // Node count mismatch.
  std::string shortn = "W 20\nR 5\nsink_x 10\nsink_y 10\nn 3\n10 10\n4 4\n";
  CHECK_THROWS(parse_graph(shortn), ParseError);
}

void test_corrupted_adjacency_detected() {
  GraphInstance g = generate_graph(GridParams{20, 6.0}, 10, {10, 10}, 11);
  // Drop one stored edge; the instance no longer matches the range predicate.
  for (size_t i = 0; i < g.node_count(); ++i) {
    if (!g.adjacency[i].empty()) {
      g.adjacency[i].pop_back();
      break;
    }
  }
  CHECK_THROWS(validate_instance(g), ParseError);
}

void test_degree_statistics() {
  // Mean interior degree over 100 graphs should sit near N * pi R^2 / W^2.
  GridParams p{100, 20.0};
  const double expected = 100.0 * 3.14159265358979 * 20.0 * 20.0 / (100.0 * 100.0);
  double degree_sum = 0;
  uint64_t interior_nodes = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    GraphInstance g = generate_graph(p, 100, {50, 50}, 1000 + seed);
    for (size_t i = 0; i < g.node_count(); ++i) {
      const Location v = g.nodes[i];
      if (v.x >= 20 && v.x < 80 && v.y >= 20 && v.y < 80) {
        degree_sum += static_cast<double>(g.adjacency[i].size());
        ++interior_nodes;
      }
    }
  }
  double mean_degree = degree_sum / static_cast<double>(interior_nodes);
  CHECK(mean_degree > 0.75 * expected);
  CHECK(mean_degree < 1.25 * expected);
}

}  // namespace

int main() {
  test_generate_default_params();
  test_generate_singleton();
  test_generate_complete_graph();
  test_generate_errors();
  test_disconnected_pair_reported();
  test_roundtrip_and_determinism();
  test_parse_rejects_bad_input();
  test_corrupted_adjacency_detected();
  test_degree_statistics();
  return testutil::summary("graph");
}
