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

#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "hyperprice/common.hpp"
#include "hyperprice/csr.hpp"
#include "hyperprice/dataset.hpp"

namespace hyperprice {

struct NodeRef {
  NodeType type = NodeType::kId;
  int index = 0;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

enum class EdgeType { kFeature, kPrice, kSession };

struct Hyperedge {
  EdgeType type = EdgeType::kFeature;
  std::vector<NodeRef> members;
};

/// Global heterogeneous hypergraph over item ids, price levels, categories and brands.
/// Two nodes are adjacent when they share at least one hyperedge.
class HeteroHypergraph {
 public:
  /// Builds feature edges for every catalog item and price/session edges for every
  /// training session (prefix and target).
  static HeteroHypergraph build(const SessionSet& train, const ItemCatalog& catalog);

  int num_nodes(NodeType t) const { return counts_[type_index(t)]; }
  const std::vector<Hyperedge>& hyperedges() const { return edges_; }

  /// Sorted unique neighbors of `node` with type `target`, never `node` itself.
  std::span<const int> adjacent(NodeRef node, NodeType target) const {
    return adjacency_[type_index(node.type)][type_index(target)].row(node.index);
  }
  /// Same-type neighbors (shared session or price hyperedge).
  std::span<const int> cooccurring(NodeRef node) const { return adjacent(node, node.type); }

  const Csr& adjacency(NodeType from, NodeType to) const {
    return adjacency_[type_index(from)][type_index(to)];
  }

  /// Number of hyperedges that contain each node of type t.
  std::vector<int> hyperedge_degrees(NodeType t) const;

  void write_stats(std::ostream& out) const;

 private:
  std::array<int, kNumNodeTypes> counts_{};
  std::vector<Hyperedge> edges_;
  std::array<std::array<Csr, kNumNodeTypes>, kNumNodeTypes> adjacency_;
};

/// Uniform sample of at most `cap` entries without replacement, returned sorted.
/// Identity when the list already fits.
std::vector<int> sample_neighbors(std::span<const int> list, int cap, std::uint64_t seed);

/// Neighbor lists used by one model: restricted to the active node types and capped.
struct NeighborIndex {
  std::array<bool, kNumNodeTypes> active{};
  std::array<int, kNumNodeTypes> counts{};
  std::array<std::array<Csr, kNumNodeTypes>, kNumNodeTypes> adjacency;  // [target][source]
  std::array<Csr, kNumNodeTypes> merged;  // all active sources, indices into stacked tables

  /// Row offset of each active type inside the stacked (merged) table, in canonical order.
  std::array<int, kNumNodeTypes> stacked_offset{};

  static NeighborIndex build(const HeteroHypergraph& graph, std::array<bool, kNumNodeTypes> active,
                             int cap, std::uint64_t seed);
};

}  // namespace hyperprice
