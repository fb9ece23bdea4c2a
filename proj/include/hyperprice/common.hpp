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
#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperprice {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Node types of the heterogeneous hypergraph, in canonical order.
enum class NodeType : int { kId = 0, kPrice = 1, kCategory = 2, kBrand = 3 };

inline constexpr int kNumNodeTypes = 4;
inline constexpr std::array<NodeType, kNumNodeTypes> kAllNodeTypes = {
    NodeType::kId, NodeType::kPrice, NodeType::kCategory, NodeType::kBrand};

constexpr int type_index(NodeType t) { return static_cast<int>(t); }

inline std::string_view type_name(NodeType t) {
  switch (t) {
    case NodeType::kId: return "id";
    case NodeType::kPrice: return "price";
    case NodeType::kCategory: return "category";
    case NodeType::kBrand: return "brand";
  }
  return "?";
}

/// splitmix64 finalizer; used to derive independent seeds from (seed, key) pairs.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
  return mix_seed(seed ^ mix_seed(key));
}

}  // namespace hyperprice
