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

// Triple-level convolution over the heterogeneous hypergraph: co-occurrence averaging,
// attention within one neighbor type, and gated fusion across the other types.
// Every function works on whole typed tables (one row per node).

#include <vector>

#include "hyperprice/csr.hpp"
#include "hyperprice/tape.hpp"

namespace hyperprice::conv {

using ad::Var;

/// Mean of the co-occurring same-type rows; zero rows for nodes without co-occurrence.
template <typename T>
Var<T> cooccurrence_conv(const Csr& cooc, Var<T> table) {
  return ad::csr_mean(cooc, table);
}

/// e_i = sum_k alpha_k v_k with alpha = softmax_k(v_i^T W v_k) over the neighbors of i in
/// `adjacency` (rows index `target`, columns index `source`). Empty neighbor sets give zero.
template <typename T>
Var<T> intra_type_conv(const Csr& adjacency, Var<T> target, Var<T> source, Var<T> weight) {
  // Row form of v_i^T W is (v_i^T W), i.e. target * W.
  return ad::csr_attention(adjacency, ad::matmul(target, weight), source, source);
}

/// h = v + sum_j tanh(W_a [v; e_1; ...; e_k] + W_j e_j) * e_j.
/// `fuse` is d x (k+1)d and `gates` holds one d x d matrix per type embedding.
template <typename T>
Var<T> inter_type_conv(Var<T> v, const std::vector<Var<T>>& type_embeddings, Var<T> fuse,
                       const std::vector<Var<T>>& gates) {
  if (type_embeddings.size() != gates.size()) throw Error("inter_type_conv: one gate per type");
  if (type_embeddings.empty()) return v;
  std::vector<Var<T>> parts{v};
  parts.insert(parts.end(), type_embeddings.begin(), type_embeddings.end());
  Var<T> merged = ad::matmul_nt(ad::hcat(parts), fuse);
  Var<T> h = v;
  for (std::size_t j = 0; j < type_embeddings.size(); ++j) {
    Var<T> g = ad::tanh(merged + ad::matmul_nt(type_embeddings[j], gates[j]));
    h = h + ad::hadamard(g, type_embeddings[j]);
  }
  return h;
}

}  // namespace hyperprice::conv
