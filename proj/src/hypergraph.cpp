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

#include "hyperprice/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace hyperprice {

HeteroHypergraph HeteroHypergraph::build(const SessionSet& train, const ItemCatalog& catalog) {
  if (train.sessions.empty()) throw Error("cannot build a hypergraph from an empty training set");
  if (catalog.levels < 1) throw Error("catalog has no price levels assigned");

  HeteroHypergraph g;
  g.counts_ = {catalog.size(), catalog.levels, static_cast<int>(catalog.categories.size()),
               static_cast<int>(catalog.brands.size())};

  for (int i = 0; i < catalog.size(); ++i) {
    const auto& item = catalog.items[i];
    if (item.price_level < 1 || item.price_level > catalog.levels) {
      throw Error("item " + item.raw_id + " has no valid price level");
    }
    g.edges_.push_back({EdgeType::kFeature,
                        {{NodeType::kId, i},
                         {NodeType::kPrice, item.price_level - 1},
                         {NodeType::kCategory, item.category},
                         {NodeType::kBrand, item.brand}}});
  }
  for (const auto& s : train.sessions) {
    auto seq = s.sequence();
    std::vector<int> ids = seq;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<int> levels;
    for (int i : ids) levels.push_back(catalog.items.at(i).price_level - 1);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    Hyperedge price{EdgeType::kPrice, {}};
    for (int l : levels) price.members.push_back({NodeType::kPrice, l});
    Hyperedge session{EdgeType::kSession, {}};
    for (int i : ids) session.members.push_back({NodeType::kId, i});
    g.edges_.push_back(std::move(price));
    g.edges_.push_back(std::move(session));
  }

  std::array<std::array<std::vector<std::vector<int>>, kNumNodeTypes>, kNumNodeTypes> lists;
  for (int t = 0; t < kNumNodeTypes; ++t)
    for (int u = 0; u < kNumNodeTypes; ++u) lists[t][u].resize(g.counts_[t]);
  for (const auto& e : g.edges_) {
    for (const auto& a : e.members) {
      for (const auto& b : e.members) {
        if (a == b) continue;
        lists[type_index(a.type)][type_index(b.type)][a.index].push_back(b.index);
      }
    }
  }
  for (int t = 0; t < kNumNodeTypes; ++t) {
    for (int u = 0; u < kNumNodeTypes; ++u) {
      for (auto& l : lists[t][u]) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
      }
      g.adjacency_[t][u] = Csr::from_lists(lists[t][u]);
    }
  }
  return g;
}

std::vector<int> HeteroHypergraph::hyperedge_degrees(NodeType t) const {
  std::vector<int> deg(num_nodes(t), 0);
  for (const auto& e : edges_)
    for (const auto& m : e.members)
      if (m.type == t) ++deg[m.index];
  return deg;
}

void HeteroHypergraph::write_stats(std::ostream& out) const {
  out << "section,key,value\n";
  for (auto t : kAllNodeTypes) out << "nodes," << type_name(t) << ',' << num_nodes(t) << '\n';
  std::array<int, 3> edge_counts{};
  for (const auto& e : edges_) ++edge_counts[static_cast<int>(e.type)];
  out << "hyperedges,feature," << edge_counts[0] << '\n';
  out << "hyperedges,price," << edge_counts[1] << '\n';
  out << "hyperedges,session," << edge_counts[2] << '\n';
  // Degree histogram in power-of-two buckets: bucket b holds degrees in [2^b, 2^(b+1)).
  for (auto t : kAllNodeTypes) {
    std::map<int, int> hist;
    for (int d : hyperedge_degrees(t)) {
      int b = 0;
      while ((2 << b) <= d) ++b;
      ++hist[d == 0 ? -1 : b];
    }
    for (auto [b, count] : hist) {
      out << "degree_" << type_name(t) << ',';
      if (b < 0) {
        out << "0";
      } else {
        out << (1 << b) << '-' << ((2 << b) - 1);
      }
      out << ',' << count << '\n';
    }
  }
}

std::vector<int> sample_neighbors(std::span<const int> list, int cap, std::uint64_t seed) {
  if (cap < 1) throw Error("neighbor cap must be at least 1");
  std::vector<int> out(list.begin(), list.end());
  if (static_cast<int>(out.size()) <= cap) return out;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cap; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, out.size() - 1);
    std::swap(out[i], out[pick(rng)]);
  }
  out.resize(cap);
  std::sort(out.begin(), out.end());
  return out;
}

NeighborIndex NeighborIndex::build(const HeteroHypergraph& graph,
                                   std::array<bool, kNumNodeTypes> active, int cap,
                                   std::uint64_t seed) {
  NeighborIndex idx;
  idx.active = active;
  int offset = 0;
  for (auto t : kAllNodeTypes) {
    const int ti = type_index(t);
    idx.counts[ti] = active[ti] ? graph.num_nodes(t) : 0;
    idx.stacked_offset[ti] = offset;
    offset += idx.counts[ti];
  }
  for (auto t : kAllNodeTypes) {
    const int ti = type_index(t);
    std::vector<std::vector<int>> merged(idx.counts[ti]);
    for (auto u : kAllNodeTypes) {
      const int ui = type_index(u);
      std::vector<std::vector<int>> lists(idx.counts[ti]);
      if (active[ti] && active[ui]) {
        for (int i = 0; i < idx.counts[ti]; ++i) {
          const std::uint64_t key = (static_cast<std::uint64_t>(ti * kNumNodeTypes + ui) << 32) |
                                    static_cast<std::uint32_t>(i);
          lists[i] = sample_neighbors(graph.adjacent({t, i}, u), cap, mix_seed(seed, key));
          for (int j : lists[i]) merged[i].push_back(idx.stacked_offset[ui] + j);
        }
      }
      idx.adjacency[ti][ui] = Csr::from_lists(lists);
    }
    idx.merged[ti] = Csr::from_lists(merged);
  }
  return idx;
}

}  // namespace hyperprice
