/**
 * Copyright 2026 The hyperprice Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sstream>

#include "graph_oracle.hpp"
#include "hyperprice/hypergraph.hpp"
#include "test_util.hpp"

namespace hyperprice {
namespace {

/// Items i1, i2, i3 (indices 0..2) with levels L, M, L; sessions S1=[i1,i2], S2=[i2,i3].
testing::ToyGraph three_item_toy() {
  testing::ToyGraph g;
  g.catalog.levels = 3;
  g.catalog.categories = {"c0", "c1"};
  g.catalog.brands = {"b0"};
  g.catalog.items = {{"i1", 1.0, 0, 0, 2}, {"i2", 2.0, 1, 0, 3}, {"i3", 3.0, 0, 0, 2}};
  g.train.catalog = g.catalog;
  g.train.sessions = {{"S1", {0}, 1, {}}, {"S2", {1}, 2, {}}};
  return g;
}

std::vector<int> to_vec(std::span<const int> s) { return {s.begin(), s.end()}; }

TEST(Hypergraph, PriceNeighborOnlyViaFeatureEdge) {
  const auto toy = three_item_toy();
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  EXPECT_EQ(to_vec(g.adjacent({NodeType::kId, 0}, NodeType::kPrice)), std::vector<int>{1});
}

TEST(Hypergraph, SessionCooccurrence) {
  const auto toy = three_item_toy();
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  EXPECT_EQ(to_vec(g.cooccurring({NodeType::kId, 0})), std::vector<int>{1});
  EXPECT_EQ(to_vec(g.cooccurring({NodeType::kId, 1})), (std::vector<int>{0, 2}));
}

TEST(Hypergraph, LevelAdjacentToItsItems) {
  const auto toy = three_item_toy();
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  EXPECT_EQ(to_vec(g.adjacent({NodeType::kPrice, 1}, NodeType::kId)), (std::vector<int>{0, 2}));
  EXPECT_EQ(to_vec(g.adjacent({NodeType::kPrice, 2}, NodeType::kId)), std::vector<int>{1});
}

TEST(Hypergraph, PriceEdgeCooccurrence) {
  const auto toy = three_item_toy();
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  // Both sessions mix levels 2 and 3.
  EXPECT_EQ(to_vec(g.cooccurring({NodeType::kPrice, 1})), std::vector<int>{2});
  EXPECT_TRUE(g.cooccurring({NodeType::kPrice, 0}).empty());
}

TEST(Hypergraph, CategoryAndBrandHaveNoCooccurrence) {
  const auto toy = three_item_toy();
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  for (int c = 0; c < 2; ++c) EXPECT_TRUE(g.cooccurring({NodeType::kCategory, c}).empty());
  EXPECT_TRUE(g.cooccurring({NodeType::kBrand, 0}).empty());
}

TEST(Hypergraph, ThreeItemSessionCooccurrence) {
  auto toy = three_item_toy();
  toy.train.sessions = {{"S", {0, 1}, 2, {}}};
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  EXPECT_EQ(to_vec(g.cooccurring({NodeType::kId, 1})), (std::vector<int>{0, 2}));
}

TEST(Hypergraph, EdgeCountsAndShapes) {
  const auto toy = three_item_toy();
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  int feature = 0, price = 0, session = 0;
  for (const auto& e : g.hyperedges()) {
    switch (e.type) {
      case EdgeType::kFeature:
        ++feature;
        EXPECT_EQ(e.members.size(), 4u);
        break;
      case EdgeType::kPrice:
        ++price;
        for (const auto& m : e.members) EXPECT_EQ(m.type, NodeType::kPrice);
        break;
      case EdgeType::kSession:
        ++session;
        for (const auto& m : e.members) EXPECT_EQ(m.type, NodeType::kId);
        break;
    }
  }
  EXPECT_EQ(feature, 3);
  EXPECT_EQ(price, 2);
  EXPECT_EQ(session, 2);
  EXPECT_EQ(g.num_nodes(NodeType::kPrice), 3);
}

TEST(Hypergraph, RepeatedItemsDeduplicated) {
  auto toy = three_item_toy();
  toy.train.sessions = {{"S", {0, 0, 0}, 0, {}}};
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  for (const auto& e : g.hyperedges()) {
    if (e.type == EdgeType::kSession) {
      EXPECT_EQ(e.members.size(), 1u);
    }
    if (e.type == EdgeType::kPrice) {
      EXPECT_EQ(e.members.size(), 1u);
    }
  }
  EXPECT_TRUE(g.cooccurring({NodeType::kId, 0}).empty());
}

TEST(Hypergraph, EmptyTrainingSetIsAnError) {
  auto toy = three_item_toy();
  toy.train.sessions.clear();
  EXPECT_THROW(HeteroHypergraph::build(toy.train, toy.catalog), Error);
}

TEST(Hypergraph, EveryItemInExactlyOneFeatureEdge) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto toy = testing::random_toy_graph(rng);
    const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
    std::vector<int> count(toy.catalog.size(), 0);
    for (const auto& e : g.hyperedges()) {
      if (e.type != EdgeType::kFeature) continue;
      for (const auto& m : e.members)
        if (m.type == NodeType::kId) ++count[m.index];
    }
    for (int c : count) EXPECT_EQ(c, 1);
  }
}

TEST(Hypergraph, MatchesBruteForceScan) {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 100; ++trial) {
    const auto toy = testing::random_toy_graph(rng);
    std::string where;
    EXPECT_TRUE(testing::adjacency_matches_oracle(toy, &where)) << "trial " << trial << ": " << where;
  }
}

TEST(Hypergraph, AdjacencyIsSymmetricAndIrreflexive) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto toy = testing::random_toy_graph(rng);
    const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
    for (auto t : kAllNodeTypes) {
      for (int a = 0; a < g.num_nodes(t); ++a) {
        for (auto u : kAllNodeTypes) {
          const auto nb = g.adjacent({t, a}, u);
          EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
          EXPECT_EQ(std::adjacent_find(nb.begin(), nb.end()), nb.end());
          for (int b : nb) {
            if (t == u) {
              EXPECT_NE(a, b);
            }
            const auto back = g.adjacent({u, b}, t);
            EXPECT_TRUE(std::binary_search(back.begin(), back.end(), a));
          }
        }
      }
    }
  }
}

TEST(Hypergraph, BuildIsDeterministic) {
  std::mt19937_64 rng(5);
  const auto toy = testing::random_toy_graph(rng);
  const auto a = HeteroHypergraph::build(toy.train, toy.catalog);
  const auto b = HeteroHypergraph::build(toy.train, toy.catalog);
  std::ostringstream sa, sb;
  a.write_stats(sa);
  b.write_stats(sb);
  EXPECT_EQ(sa.str(), sb.str());
  for (auto t : kAllNodeTypes)
    for (auto u : kAllNodeTypes) {
      EXPECT_EQ(a.adjacency(t, u).indices, b.adjacency(t, u).indices);
      EXPECT_EQ(a.adjacency(t, u).offsets, b.adjacency(t, u).offsets);
    }
}

TEST(Hypergraph, StatsReportCounts) {
  const auto toy = three_item_toy();
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  std::ostringstream out;
  g.write_stats(out);
  const auto text = out.str();
  EXPECT_NE(text.find("nodes,id,3\n"), std::string::npos);
  EXPECT_NE(text.find("nodes,price,3\n"), std::string::npos);
  EXPECT_NE(text.find("hyperedges,feature,3\n"), std::string::npos);
  EXPECT_NE(text.find("hyperedges,session,2\n"), std::string::npos);
}

TEST(SampleNeighbors, IdentityWhenUnderCap) {
  const std::vector<int> list{1, 4, 9};
  EXPECT_EQ(sample_neighbors(list, 10, 1), list);
}

TEST(SampleNeighbors, StableSubsetUnderFixedSeed) {
  std::vector<int> list(1000);
  std::iota(list.begin(), list.end(), 0);
  const auto a = sample_neighbors(list, 200, 17);
  const auto b = sample_neighbors(list, 200, 17);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 200u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::adjacent_find(a.begin(), a.end()), a.end());
  EXPECT_NE(sample_neighbors(list, 200, 18), a);
}

TEST(NeighborIndex, MatchesGraphWithoutCap) {
  std::mt19937_64 rng(8);
  const auto toy = testing::random_toy_graph(rng);
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  const auto idx = NeighborIndex::build(g, {true, true, true, true}, 1000, 3);
  for (auto t : kAllNodeTypes)
    for (auto u : kAllNodeTypes) {
      EXPECT_EQ(idx.adjacency[type_index(t)][type_index(u)].indices, g.adjacency(t, u).indices);
    }
}

TEST(NeighborIndex, InactiveTypesAreDropped) {
  const auto toy = three_item_toy();
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  const auto idx = NeighborIndex::build(g, {true, false, true, true}, 200, 3);
  EXPECT_EQ(idx.counts[type_index(NodeType::kPrice)], 0);
  EXPECT_EQ(idx.adjacency[0][type_index(NodeType::kPrice)].nnz(), 0);
  // Merged lists hold category and brand neighbors at their stacked offsets.
  const auto merged = idx.merged[0].row(0);
  const int cat_offset = idx.stacked_offset[type_index(NodeType::kCategory)];
  EXPECT_EQ(cat_offset, 3);
  EXPECT_NE(std::find(merged.begin(), merged.end(), cat_offset + 0), merged.end());
}

TEST(NeighborIndex, CapLimitsEveryList) {
  std::mt19937_64 rng(12);
  const auto toy = testing::random_toy_graph(rng);
  const auto g = HeteroHypergraph::build(toy.train, toy.catalog);
  const auto idx = NeighborIndex::build(g, {true, true, true, true}, 2, 9);
  for (int t = 0; t < kNumNodeTypes; ++t)
    for (int u = 0; u < kNumNodeTypes; ++u)
      for (int i = 0; i < idx.adjacency[t][u].rows(); ++i) {
        EXPECT_LE(idx.adjacency[t][u].degree(i), 2);
        const auto full = g.adjacent({kAllNodeTypes[t], i}, kAllNodeTypes[u]);
        for (int j : idx.adjacency[t][u].row(i)) EXPECT_TRUE(std::binary_search(full.begin(), full.end(), j));
      }
}

}  // namespace
}  // namespace hyperprice
