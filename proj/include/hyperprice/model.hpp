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
#include <string>
#include <vector>

#include "hyperprice/hypergraph.hpp"
#include "hyperprice/params.hpp"
#include "hyperprice/preference.hpp"
#include "hyperprice/price_levels.hpp"

namespace hyperprice {

/// Ablation switches. The default is the full model.
struct VariantFlags {
  bool use_price = true;
  bool use_category = true;
  bool use_brand = true;
  bool price_in_conv_only = false;  // keep price nodes in the graph, drop the price branch
  bool uniform_levels = false;      // uniform instead of logistic price levels
  bool gcn_aggregation = false;     // plain mean over all adjacent nodes
  bool no_cooccurrence = false;     // drop the co-occurrence term
  bool no_fusion = false;           // feed the raw preferences to the joint scorer
  bool single_loss = false;         // one cross-entropy over the joint item scores

  friend bool operator==(const VariantFlags&, const VariantFlags&) = default;

  /// Node types taking part in the convolution.
  std::array<bool, kNumNodeTypes> active_types() const;
  /// True when the model has a price preference branch and a joint scorer.
  bool price_branch() const { return use_price && !price_in_conv_only; }
  void validate() const;
};

/// Named variants: full, -p, -pp, uni, wo-c, wo-b, wo-pc, wo-pb, wo-cb, wo-pcb, gcn, -co,
/// -BiP, CE. "w/o-x" and "wo-p" are accepted as aliases.
VariantFlags parse_variant(const std::string& name);
const std::vector<std::string>& variant_names();
std::string variant_name(const VariantFlags& flags);

struct ModelConfig {
  int dim = 128;
  int heads = 8;
  int layers = 3;  // convolution iterations r
  int levels = 5;  // rho
  int n_items = 0;
  int n_categories = 0;
  int n_brands = 0;
  int max_len = 19;  // position table size
  int neighbor_cap = 200;
  std::uint64_t graph_seed = 0;  // neighbor sampling
  VariantFlags variant;

  void validate() const;
};

/// Parameter name of the embedding table of a node type.
std::string embedding_name(NodeType t);

/// Catalog used by a variant: the uniform ablation replaces every item's level.
ItemCatalog variant_catalog(const ItemCatalog& catalog, const VariantFlags& variant);

/// Tape outputs of one forward pass over a batch.
template <typename T>
struct ForwardResult {
  std::array<ad::Var<T>, kNumNodeTypes> initial;  // embedding tables (invalid if inactive)
  std::array<ad::Var<T>, kNumNodeTypes> final;    // convolution outputs
  ad::Var<T> price_hat, interest_hat;             // price_hat invalid without a price branch
  ad::Var<T> price, interest;                     // after fusion (or copies of the hats)
  ad::Var<T> interest_logits;                     // batch x n_items
  ad::Var<T> price_logits;                        // batch x rho (price branch only)
  ad::Var<T> scores;                              // logits used for ranking
};

template <typename T>
class Model {
 public:
  /// `item_levels` are 1-based levels of every catalog item under this variant.
  Model(ModelConfig config, std::vector<int> item_levels);

  const ModelConfig& config() const { return config_; }
  const std::vector<int>& item_levels() const { return levels0_; }

  /// Parameter names, shapes and init rules, in declaration order.
  struct ParamSpec {
    std::string name;
    Eigen::Index rows, cols;
    ParamInit init;
  };
  std::vector<ParamSpec> param_specs() const;

  /// Declares and fills all parameters: U(-1/sqrt(d), 1/sqrt(d)) weights, zero biases.
  ParameterStore<T> init_params(std::uint64_t seed) const;

  /// Convolution over every node table of the active types; fills `initial` and `final`.
  void convolve(ParamBinder<T>& bind, const NeighborIndex& index, ForwardResult<T>& out) const;

  /// One synchronous convolution step over the given tables.
  std::array<ad::Var<T>, kNumNodeTypes> step(ParamBinder<T>& bind, const NeighborIndex& index,
                                             const std::array<ad::Var<T>, kNumNodeTypes>& tables) const;

  /// Preference mining and heads on top of an already convolved `out`.
  void mine(ParamBinder<T>& bind, const SessionBatch& batch, ForwardResult<T>& out) const;

  ForwardResult<T> forward(ParamBinder<T>& bind, const NeighborIndex& index,
                           const SessionBatch& batch) const;

  /// Training objective for the variant; mean over the batch. `clamped` counts floored terms.
  ad::Var<T> loss(const ForwardResult<T>& out, const SessionBatch& batch, int* clamped = nullptr) const;

  /// Builds a batch with this model's levels and position table.
  SessionBatch make_batch(const std::vector<const Session*>& sessions) const;

 private:
  ModelConfig config_;
  std::vector<int> levels0_;  // 0-based
};

/// Top-k item indices by descending score, ties by ascending index.
std::vector<int> top_k(std::span<const double> scores, int k);
template <typename T>
std::vector<int> top_k_row(const Matrix<T>& scores, Eigen::Index row, int k);

/// Forward + backward on one batch: fills store gradients and returns the loss.
/// Throws when any parameter gradient or the loss is non-finite, naming the tensor.
template <typename T>
double loss_and_gradients(const Model<T>& model, ParameterStore<T>& store, const NeighborIndex& index,
                          const SessionBatch& batch, int* clamped = nullptr);

/// Loss only, with every parameter bound as a constant.
template <typename T>
double evaluate_loss(const Model<T>& model, const ParameterStore<T>& store, const NeighborIndex& index,
                     const SessionBatch& batch);

}  // namespace hyperprice
