// Copyright 2026 The qaoa-maxcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qaoa/graph.hpp"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"

using namespace qaoa;

namespace {

Graph triangle() { return Graph(3, {{0, 1}, {0, 2}, {1, 2}}); }
Graph path3() { return Graph(3, {{0, 1}, {1, 2}}); }
Graph cycle4() { return Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

}  // namespace

TEST(Graph, canonicalizes_edge_order) {
  Graph g(4, {{3, 1}, {0, 2}, {1, 0}});
  ASSERT_EQ(g.num_edges(), 3);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(g.edges()[1], (Edge{0, 2}));
  EXPECT_EQ(g.edges()[2], (Edge{1, 3}));
}

TEST(Graph, rejects_invariant_violations) {
  EXPECT_THROW(Graph(3, {{1, 1}}), InvalidArgument);
  EXPECT_THROW(Graph(3, {{0, 3}}), InvalidArgument);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), InvalidArgument);
  EXPECT_THROW(Graph(0, {}), InvalidArgument);
}

TEST(ErdosRenyi, extreme_probabilities) {
  EXPECT_EQ(generate_erdos_renyi(10, 0.0, 123).num_edges(), 0);
  EXPECT_EQ(generate_erdos_renyi(10, 1.0, 123).num_edges(), 45);
}

TEST(ErdosRenyi, deterministic_under_seed) {
  EXPECT_EQ(generate_erdos_renyi(10, 0.5, 42), generate_erdos_renyi(10, 0.5, 42));
  EXPECT_NE(generate_erdos_renyi(10, 0.5, 42).edges(), generate_erdos_renyi(10, 0.5, 43).edges());
}

TEST(ErdosRenyi, rejects_bad_probability) {
  EXPECT_THROW(generate_erdos_renyi(5, -0.1, 1), InvalidArgument);
  EXPECT_THROW(generate_erdos_renyi(5, 1.5, 1), InvalidArgument);
  EXPECT_THROW(generate_erdos_renyi(5, std::nan(""), 1), InvalidArgument);
}

TEST(ErdosRenyi, mean_edge_count_is_binomial) {
  double total = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) total += generate_erdos_renyi(10, 0.5, seed).num_edges();
  const double mean = total / 1000.0;
  EXPECT_NEAR(mean, 22.5, 3.0 * std::sqrt(45 * 0.25));
}

TEST(CutValue, small_cases) {
  EXPECT_EQ(cut_value(triangle(), Partition::from_string("000")), 0);
  EXPECT_EQ(cut_value(triangle(), Partition::from_string("001")), 2);
  EXPECT_EQ(cut_value(path3(), Partition::from_string("010")), 2);
  EXPECT_THROW(cut_value(triangle(), Partition::from_string("01")), InvalidArgument);
}

TEST(CutValue, complement_symmetry) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = generate_erdos_renyi(8, 0.4, rng());
    const Partition p = Partition::from_index(rng() & 0xff, 8);
    EXPECT_EQ(cut_value(g, p), cut_value(g, p.complement()));
  }
}

TEST(CutTable, matches_direct_cut_values) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = generate_erdos_renyi(9, 0.5, seed);
    const auto table = cut_table(g);
    ASSERT_EQ(table.size(), 512u);
    for (std::uint64_t i = 0; i < table.size(); ++i) {
      ASSERT_EQ(table[i], cut_value(g, Partition::from_index(i, 9))) << "seed " << seed << " index " << i;
    }
  }
}

TEST(BruteForce, small_cases) {
  EXPECT_EQ(brute_force_maxcut(Graph(2, {{0, 1}})).cut_value, 1);
  EXPECT_EQ(brute_force_maxcut(triangle()).cut_value, 2);
  const CutResult c4 = brute_force_maxcut(cycle4());
  EXPECT_EQ(c4.cut_value, 4);
  // Vertex 0 pinned to side 0; smallest optimal assignment is 1010 (vertices 1 and 3).
  EXPECT_EQ(c4.partition.to_string(), "1010");
  EXPECT_EQ(cut_value(cycle4(), c4.partition), c4.cut_value);
}

TEST(BruteForce, triangle_tie_break_is_smallest_assignment) {
  // Candidates with vertex 0 on side 0: 000, 010, 100, 110 (as vertex-2..0 strings);
  // the first with cut 2 in integer order is index 2 = "010".
  EXPECT_EQ(brute_force_maxcut(triangle()).partition.to_string(), "010");
}

TEST(BruteForce, rejects_large_instances) {
  const Graph big(25, {});
  try {
    brute_force_maxcut(big);
    FAIL() << "expected an exception";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("instance too large for oracle"), std::string::npos);
  }
}

TEST(OneExchange, triangle_reaches_two) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) EXPECT_EQ(one_exchange_maxcut(triangle(), seed).cut_value, 2);
  EXPECT_EQ(one_exchange_from(triangle(), Partition::zeros(3)).cut_value, 2);
}

TEST(OneExchange, zeros_start_flips_lowest_index_on_ties) {
  // From 000 every vertex of K3 gains 2; vertex 0 moves first and the search stops.
  EXPECT_EQ(one_exchange_from(triangle(), Partition::zeros(3)).partition.to_string(), "001");
}

TEST(OneExchange, empty_graph) { EXPECT_EQ(one_exchange_maxcut(Graph(5, {}), 9).cut_value, 0); }

TEST(OneExchange, cycle_meets_local_bound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) EXPECT_GE(one_exchange_maxcut(cycle4(), seed).cut_value, 2);
}

TEST(OneExchange, local_optimality_and_oracle_bounds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = generate_erdos_renyi(9, 0.5, seed);
    const CutResult r = one_exchange_maxcut(g, seed * 31 + 7);
    EXPECT_EQ(r.cut_value, cut_value(g, r.partition));
    EXPECT_TRUE(is_one_exchange_optimal(g, r.partition));
    // Per-vertex form of the predicate.
    const auto deg = g.degrees();
    const auto gain = flip_gains(g, r.partition);
    for (int v = 0; v < g.n(); ++v) {
      const int cut_incident = (deg[v] - gain[v]) / 2;
      EXPECT_GE(cut_incident, deg[v] - cut_incident);
    }
    const int best = brute_force_maxcut(g).cut_value;
    EXPECT_GE(r.cut_value, 0);
    EXPECT_LE(r.cut_value, best);
    EXPECT_LE(best, g.num_edges());
  }
}

TEST(OneExchange, deterministic_under_seed) {
  const Graph g = generate_erdos_renyi(12, 0.5, 3);
  EXPECT_EQ(one_exchange_maxcut(g, 77), one_exchange_maxcut(g, 77));
}
