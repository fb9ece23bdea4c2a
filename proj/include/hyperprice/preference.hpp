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

// Session-level preference mining, bi-preference fusion and the prediction heads.

#include <cmath>
#include <vector>

#include "hyperprice/csr.hpp"
#include "hyperprice/tape.hpp"

namespace hyperprice {

/// Flattened mini-batch of session prefixes. Positions of session s occupy rows
/// offsets[s] .. offsets[s+1] in chronological order.
struct SessionBatch {
  std::vector<int> offsets{0};
  std::vector<int> items;         // catalog index per position
  std::vector<int> price_nodes;   // 0-based price level per position
  std::vector<int> positions;     // reversed: the last item of each session gets 0
  std::vector<int> row_session;   // owning session per position
  std::vector<int> last;          // row of the last position per session
  std::vector<int> targets;       // target item per session, -1 when unknown
  std::vector<int> target_levels; // 0-based target level per session, -1 when unknown
  Csr sessions;                   // session -> its position rows

  int size() const { return static_cast<int>(offsets.size()) - 1; }
  int rows() const { return offsets.back(); }

  /// Appends one prefix. `item_levels` holds the 0-based level of every catalog item;
  /// `target` may be -1 for sessions without a known next item.
  void add(const std::vector<int>& prefix, int target, const std::vector<int>& item_levels,
           int max_len);
  /// Builds the session Csr; call after the last add().
  void finalize();
};

namespace pref {

using ad::Var;

/// tanh(W [x_i; pos_i] + b) for every row.
template <typename T>
Var<T> position_enhance(Var<T> sequence, Var<T> positions, Var<T> weight, Var<T> bias) {
  return ad::tanh(ad::add_row(ad::matmul_nt(ad::hcat<T>({sequence, positions}), weight), bias));
}

/// Multi-head scaled dot-product self-attention over each session, read out at the last
/// position. Projections are d x d, head i using rows [i*d/h, (i+1)*d/h).
template <typename T>
Var<T> price_preference(const SessionBatch& batch, Var<T> enhanced, Var<T> query, Var<T> key,
                        Var<T> value, int heads) {
  const auto d = enhanced.cols();
  if (heads < 1 || d % heads != 0) throw Error("price_preference: heads must divide the dimension");
  const auto width = d / heads;
  Var<T> q = ad::gather_rows(ad::matmul_nt(enhanced, query), batch.last);
  q = ad::scale(q, static_cast<T>(1.0 / std::sqrt(static_cast<double>(width))));
  Var<T> k = ad::matmul_nt(enhanced, key);
  Var<T> v = ad::matmul_nt(enhanced, value);
  if (heads == 1) return ad::csr_attention(batch.sessions, q, k, v);
  std::vector<Var<T>> outputs;
  for (int h = 0; h < heads; ++h) {
    outputs.push_back(ad::csr_attention(batch.sessions, ad::col_slice(q, h * width, width),
                                        ad::col_slice(k, h * width, width),
                                        ad::col_slice(v, h * width, width)));
  }
  return ad::hcat(outputs);
}

/// u = sum_i beta_i h_i with beta_i = z . sigmoid(A1 v_i + A2 mean(v) + b), unnormalized.
/// `enhanced` are the position-enhanced rows v_i, `raw` the convolution outputs h_i.
template <typename T>
Var<T> interest_preference(const SessionBatch& batch, Var<T> enhanced, Var<T> raw, Var<T> a1,
                           Var<T> a2, Var<T> bias, Var<T> z) {
  Var<T> mean = ad::gather_rows(ad::csr_mean(batch.sessions, enhanced), batch.row_session);
  Var<T> gate = ad::sigmoid(ad::add_row(ad::matmul_nt(enhanced, a1) + ad::matmul_nt(mean, a2), bias));
  Var<T> beta = ad::matmul_nt(gate, z);
  return ad::csr_weighted_sum(batch.sessions, beta, raw);
}

template <typename T>
struct FusionParams {
  Var<T> merge_price, merge_interest, merge_bias;
  Var<T> price_gate_price, price_gate_merge;
  Var<T> interest_gate_interest, interest_gate_merge;
};

template <typename T>
struct FusedPreferences {
  Var<T> price;
  Var<T> interest;
};

/// Gated exchange between the two preferences: each output is a per-dimension convex
/// combination of the inputs.
template <typename T>
FusedPreferences<T> fuse_preferences(Var<T> price_hat, Var<T> interest_hat, const FusionParams<T>& p) {
  Var<T> merged = ad::tanh(ad::add_row(
      ad::matmul_nt(price_hat, p.merge_price) + ad::matmul_nt(interest_hat, p.merge_interest),
      p.merge_bias));
  Var<T> keep_price = ad::sigmoid(ad::matmul_nt(price_hat, p.price_gate_price) +
                                  ad::matmul_nt(merged, p.price_gate_merge));
  Var<T> keep_interest = ad::sigmoid(ad::matmul_nt(interest_hat, p.interest_gate_interest) +
                                     ad::matmul_nt(merged, p.interest_gate_merge));
  return {interest_hat + ad::hadamard(keep_price, price_hat - interest_hat),
          price_hat + ad::hadamard(keep_interest, interest_hat - price_hat)};
}

/// Logits u . v_j against every row of an embedding table.
template <typename T>
Var<T> table_logits(Var<T> preference, Var<T> table) {
  return ad::matmul_nt(preference, table);
}

/// Joint item logits u_p . v^p[level(j)] + u_I . v^id[j]; `item_levels` are 0-based.
template <typename T>
Var<T> item_logits(Var<T> price_pref, Var<T> interest_pref, Var<T> price_table, Var<T> id_table,
                   const std::vector<int>& item_levels) {
  return ad::gather_cols(table_logits(price_pref, price_table), item_levels) +
         table_logits(interest_pref, id_table);
}

}  // namespace pref

/// Distribution over items from the interest preference and the initial id table.
template <typename T>
Vector<T> score_interest(const Vector<T>& interest, const Matrix<T>& id_table) {
  return ad::softmax_rows<T>((id_table * interest).transpose()).row(0).transpose();
}

/// Distribution over price levels from the price preference and the level table.
template <typename T>
Vector<T> score_price(const Vector<T>& price, const Matrix<T>& level_table) {
  return score_interest<T>(price, level_table);
}

/// Distribution over items combining both preferences; `item_levels` are 0-based.
template <typename T>
Vector<T> score_items(const Vector<T>& price, const Vector<T>& interest, const Matrix<T>& level_table,
                      const Matrix<T>& id_table, const std::vector<int>& item_levels) {
  Vector<T> level_logits = level_table * price;
  Matrix<T> logits(1, id_table.rows());
  logits.row(0) = (id_table * interest).transpose();
  for (Eigen::Index j = 0; j < logits.cols(); ++j) logits(0, j) += level_logits[item_levels[j]];
  return ad::softmax_rows<T>(logits).row(0).transpose();
}

/// -log y_I[target] - log y_p[level], each probability floored at 1e-12.
/// `clamped` counts floored terms.
double joint_loss(std::span<const double> interest_dist, int target_item,
                  std::span<const double> price_dist, int target_level, int* clamped = nullptr);

}  // namespace hyperprice
