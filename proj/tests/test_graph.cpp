// Copyright 2026 The dp-graphgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "dpgraphgen/graph.hpp"
#include "oracles.hpp"

using namespace dpgraphgen;

TEST_CASE("load_edge_list parses, dedups, and drops self-loops") {
  auto r = load_edge_list("0 1\n1 2");
  CHECK(r.graph.num_nodes() == 3);
  CHECK(r.graph.num_edges() == 2);
  CHECK(r.graph.has_edge(0, 1));
  CHECK(r.graph.has_edge(2, 1));

  r = load_edge_list("0 1\n1 0\n0 1");
  CHECK(r.graph.num_nodes() == 2);
  CHECK(r.graph.num_edges() == 1);
  CHECK(r.stats.duplicates_dropped == 2);

  r = load_edge_list("3 3\n0 3");
  CHECK(r.graph.num_nodes() == 4);
  CHECK(r.graph.num_edges() == 1);
  CHECK(r.graph.has_edge(0, 3));
  CHECK(r.stats.self_loops_dropped == 1);
}

TEST_CASE("load_edge_list header, comments, and errors") {
  auto r = load_edge_list("# nodes=10\n# comment\n0 1\n");
  CHECK(r.graph.num_nodes() == 10);

  CHECK_THROWS_AS(load_edge_list(""), std::invalid_argument);
  CHECK_THROWS_AS(load_edge_list("# only comments\n"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(load_edge_list("0 1\nx 2\n"),
                       doctest::Contains("line 2"), std::invalid_argument);
  CHECK_THROWS_AS(load_edge_list("0 1 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(load_edge_list("# nodes=2\n0 5\n"), std::invalid_argument);
}

TEST_CASE("edge list round-trips through the canonical format") {
  const Graph g = oracles::erdos_renyi(25, 0.2, 7);
  const auto r = load_edge_list(format_edge_list(g));
  CHECK(r.graph.num_nodes() == g.num_nodes());
  CHECK(r.graph.edges() == g.edges());
}

TEST_CASE("largest_connected_component picks and relabels") {
  // components {0,1,2} and {3,4}
  const Graph g(5, {Edge(0, 1), Edge(1, 2), Edge(3, 4)});
  const LccResult lcc = largest_connected_component(g);
  CHECK(lcc.graph.num_nodes() == 3);
  CHECK(lcc.graph.num_edges() == 2);
  CHECK(lcc.new_to_old == std::vector<NodeId>{0, 1, 2});

  // connected graph: identity
  const Graph conn(3, {Edge(0, 1), Edge(1, 2)});
  const LccResult same = largest_connected_component(conn);
  CHECK(same.graph.num_nodes() == 3);
  CHECK(same.new_to_old == std::vector<NodeId>{0, 1, 2});

  // tie in size: component with the smallest original id wins
  const Graph tie(4, {Edge(2, 3), Edge(0, 1)});
  const LccResult t = largest_connected_component(tie);
  CHECK(t.graph.num_nodes() == 2);
  CHECK(t.new_to_old == std::vector<NodeId>{0, 1});
}

TEST_CASE("split_edges sizes, connectivity, determinism") {
  const Graph g = [] {
    // Connected 20-edge graph: a 10-cycle plus chords.
    std::vector<Edge> edges;
    for (NodeId i = 0; i < 10; ++i) edges.emplace_back(i, (i + 1) % 10);
    edges.emplace_back(0, 5);
    edges.emplace_back(1, 6);
    edges.emplace_back(2, 7);
    edges.emplace_back(3, 8);
    edges.emplace_back(4, 9);
    edges.emplace_back(0, 2);
    edges.emplace_back(1, 3);
    edges.emplace_back(5, 7);
    edges.emplace_back(6, 8);
    edges.emplace_back(7, 9);
    return Graph(10, std::move(edges));
  }();
  REQUIRE(g.num_edges() == 20);

  const EdgeSplit s = split_edges(g, 0.15, 42);
  CHECK(s.validation_edges.size() == 3);
  CHECK(s.train.num_edges() == 17);
  CHECK(is_connected(s.train));
  CHECK(s.validation_non_edges.size() == 3);

  // Partition: train + validation = original, disjoint.
  std::set<Edge> all(g.edges().begin(), g.edges().end());
  std::set<Edge> seen;
  for (const Edge& e : s.train.edges()) {
    CHECK(all.count(e) == 1);
    seen.insert(e);
  }
  for (const Edge& e : s.validation_edges) {
    CHECK(all.count(e) == 1);
    CHECK(seen.count(e) == 0);
    seen.insert(e);
  }
  CHECK(seen.size() == all.size());
  for (const Edge& e : s.validation_non_edges) {
    CHECK(all.count(e) == 0);
    CHECK(e.a != e.b);
  }

  // Determinism: identical split for identical inputs.
  const EdgeSplit s2 = split_edges(g, 0.15, 42);
  CHECK(s2.train.edges() == s.train.edges());
  CHECK(s2.validation_edges == s.validation_edges);
  CHECK(s2.validation_non_edges == s.validation_non_edges);

  const EdgeSplit s3 = split_edges(g, 0.15, 43);
  CHECK((s3.validation_edges != s.validation_edges ||
         s3.validation_non_edges != s.validation_non_edges));
}

TEST_CASE("split_edges on a tree fails naming the feasible fraction") {
  std::vector<Edge> edges;
  for (NodeId i = 1; i < 8; ++i) edges.emplace_back(i - 1, i);
  const Graph tree(8, std::move(edges));
  CHECK_THROWS_WITH_AS(split_edges(tree, 0.15, 1),
                       doctest::Contains("maximum feasible fraction"),
                       std::invalid_argument);
}

TEST_CASE("split connectivity holds across many random graphs") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Graph g = oracles::erdos_renyi(30, 0.15, seed);
    if (!is_connected(g)) g = largest_connected_component(g).graph;
    if (g.num_edges() < 8) continue;
    const double frac = 0.15;
    const auto k = static_cast<std::size_t>(
        std::llround(frac * static_cast<double>(g.num_edges())));
    if (k < 1 || g.num_edges() - (g.num_nodes() - 1) < k) continue;
    const EdgeSplit s = split_edges(g, frac, seed * 31 + 5);
    CHECK(is_connected(s.train));
    CHECK(s.train.num_edges() + s.validation_edges.size() == g.num_edges());
  }
}

TEST_CASE("sample_edge_batch: exhaustive, range, determinism") {
  const Graph g = oracles::erdos_renyi(20, 0.3, 3);
  const std::size_t m = g.num_edges();
  const auto batch = sample_edge_batch(g, m, 9, 0);
  CHECK(batch.size() == m);
  std::set<Edge> uniq;
  for (const auto& [a, b] : batch) {
    CHECK(a < g.num_nodes());
    CHECK(b < g.num_nodes());
    uniq.insert(Edge(a, b));
  }
  CHECK(uniq.size() == m);  // every edge exactly once

  const auto again = sample_edge_batch(g, m, 9, 0);
  CHECK(again == batch);
  const auto next_step = sample_edge_batch(g, m, 9, 1);
  CHECK(next_step != batch);

  CHECK_THROWS_AS(sample_edge_batch(g, m + 1, 9, 0), std::invalid_argument);
}

TEST_CASE("sample_edge_batch orientation is uniform") {
  const Graph g(2, {Edge(0, 1)});
  std::size_t forward = 0;
  const std::size_t trials = 10000;
  for (std::size_t step = 0; step < trials; ++step) {
    const auto batch = sample_edge_batch(g, 1, 1234, step);
    REQUIRE(batch.size() == 1);
    if (batch[0].first == 0) ++forward;
  }
  CHECK(oracles::within_3sigma_binomial(
      static_cast<double>(forward) / trials, 0.5, trials));
}

TEST_CASE("sample_random_walks basics") {
  // Path graph 0-1: from 0 the transitions are forced.
  const Graph path(2, {Edge(0, 1)});
  const auto walks = sample_random_walks(path, 3, 50, 7, 0);
  CHECK(walks.size() == 50);
  for (const auto& w : walks) {
    REQUIRE(w.size() == 3);
    CHECK(w[0] != w[1]);
    CHECK(w[0] == w[2]);  // must bounce back
  }

  // length 2: walks are exactly edges
  const Graph g = oracles::erdos_renyi(15, 0.4, 11);
  const Graph lcc = largest_connected_component(g).graph;
  for (const auto& w : sample_random_walks(lcc, 2, 200, 5, 1)) {
    REQUIRE(w.size() == 2);
    CHECK(lcc.has_edge(w[0], w[1]));
  }

  CHECK_THROWS_AS(sample_random_walks(path, 1, 5, 1, 0),
                  std::invalid_argument);
}

TEST_CASE("random walk transitions from a star center are uniform") {
  // Star: center 0, leaves 1..3.
  const Graph star(4, {Edge(0, 1), Edge(0, 2), Edge(0, 3)});
  std::map<NodeId, std::size_t> hits;
  std::size_t from_center = 0;
  const auto walks = sample_random_walks(star, 2, 40000, 21, 0);
  for (const auto& w : walks) {
    if (w[0] != 0) continue;
    ++from_center;
    ++hits[w[1]];
  }
  REQUIRE(from_center > 5000);
  for (NodeId leaf = 1; leaf <= 3; ++leaf)
    CHECK(oracles::within_3sigma_binomial(
        static_cast<double>(hits[leaf]) / static_cast<double>(from_center),
        1.0 / 3.0, from_center));
}

TEST_CASE("load -> lcc -> split preserves edge counts") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = oracles::erdos_renyi(40, 0.08, seed);
    const Graph lcc = largest_connected_component(g).graph;
    if (lcc.num_edges() < 10 ||
        lcc.num_edges() - (lcc.num_nodes() - 1) <
            static_cast<std::size_t>(
                std::llround(0.15 * static_cast<double>(lcc.num_edges()))))
      continue;
    const EdgeSplit s = split_edges(lcc, 0.15, seed);
    CHECK(s.train.num_edges() + s.validation_edges.size() == lcc.num_edges());
  }
}
