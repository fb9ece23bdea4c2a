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

#include "hyperprice/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "hyperprice/convolution.hpp"

namespace hyperprice {

std::array<bool, kNumNodeTypes> VariantFlags::active_types() const {
  return {true, use_price, use_category, use_brand};
}

void VariantFlags::validate() const {
  if (price_in_conv_only && !use_price) throw Error("variant: -pp requires price nodes");
  if (uniform_levels && !use_price) throw Error("variant: uniform levels require price nodes");
  if (no_fusion && !price_branch()) throw Error("variant: -BiP requires the price branch");
  if (single_loss && !price_branch()) throw Error("variant: CE requires the price branch");
}

namespace {

std::vector<std::pair<std::string, VariantFlags>> make_variant_table() {
  std::vector<std::pair<std::string, VariantFlags>> table;
  auto add = [&](std::string name, auto&& edit) {
    VariantFlags f;
    edit(f);
    table.emplace_back(std::move(name), f);
  };
  add("full", [](VariantFlags&) {});
  add("-p", [](VariantFlags& f) { f.use_price = false; });
  add("-pp", [](VariantFlags& f) { f.price_in_conv_only = true; });
  add("uni", [](VariantFlags& f) { f.uniform_levels = true; });
  add("wo-c", [](VariantFlags& f) { f.use_category = false; });
  add("wo-b", [](VariantFlags& f) { f.use_brand = false; });
  add("wo-pc", [](VariantFlags& f) { f.use_price = f.use_category = false; });
  add("wo-pb", [](VariantFlags& f) { f.use_price = f.use_brand = false; });
  add("wo-cb", [](VariantFlags& f) { f.use_category = f.use_brand = false; });
  add("wo-pcb", [](VariantFlags& f) { f.use_price = f.use_category = f.use_brand = false; });
  add("gcn", [](VariantFlags& f) { f.gcn_aggregation = true; });
  add("-co", [](VariantFlags& f) { f.no_cooccurrence = true; });
  add("-BiP", [](VariantFlags& f) { f.no_fusion = true; });
  add("CE", [](VariantFlags& f) { f.single_loss = true; });
  return table;
}

const std::vector<std::pair<std::string, VariantFlags>>& variant_table() {
  static const auto table = make_variant_table();
  return table;
}

}  // namespace

VariantFlags parse_variant(const std::string& raw) {
  std::string name = raw;
  if (name.rfind("w/o-", 0) == 0) name = "wo-" + name.substr(4);
  if (name == "wo-p") name = "-p";
  for (const auto& [key, flags] : variant_table()) {
    if (key == name) return flags;
  }
  throw Error("unknown variant '" + raw + "'");
}

const std::vector<std::string>& variant_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : variant_table()) out.push_back(entry.first);
    return out;
  }();
  return names;
}

std::string variant_name(const VariantFlags& flags) {
  for (const auto& [key, f] : variant_table()) {
    if (f == flags) return key;
  }
  return "custom";
}

void ModelConfig::validate() const {
  if (dim < 1) throw Error("model: dimension must be positive");
  if (heads < 1 || dim % heads != 0) {
    throw Error("model: head count " + std::to_string(heads) + " does not divide dimension " +
                std::to_string(dim));
  }
  if (layers < 0) throw Error("model: negative convolution depth");
  if (levels < 1) throw Error("model: at least one price level required");
  if (n_items < 1) throw Error("model: empty catalog");
  if (max_len < 1) throw Error("model: empty position table");
  if (neighbor_cap < 1) throw Error("model: neighbor cap must be positive");
  variant.validate();
}

std::string embedding_name(NodeType t) { return "emb." + std::string(type_name(t)); }

ItemCatalog variant_catalog(const ItemCatalog& catalog, const VariantFlags& variant) {
  if (!variant.uniform_levels) return catalog;
  ItemCatalog out = catalog;
  const auto scheme = fit_level_scheme(catalog, catalog.levels, LevelMethod::kUniform);
  const auto levels = assign_levels(catalog, scheme);
  for (int i = 0; i < out.size(); ++i) out.items[i].price_level = levels[i];
  return out;
}

namespace {

std::string conv_name(const char* what, NodeType t) {
  return std::string("conv.") + what + "." + std::string(type_name(t));
}

std::string conv_name(const char* what, NodeType t, NodeType s) {
  return conv_name(what, t) + "." + std::string(type_name(s));
}

/// Active types other than `t`, in canonical order.
std::vector<NodeType> other_types(const std::array<bool, kNumNodeTypes>& active, NodeType t) {
  std::vector<NodeType> out;
  for (auto s : kAllNodeTypes) {
    if (s != t && active[type_index(s)]) out.push_back(s);
  }
  return out;
}

}  // namespace

template <typename T>
Model<T>::Model(ModelConfig config, std::vector<int> item_levels) : config_(std::move(config)) {
  config_.validate();
  if (static_cast<int>(item_levels.size()) != config_.n_items) {
    throw Error("model: expected one price level per item");
  }
  levels0_.reserve(item_levels.size());
  for (int level : item_levels) {
    if (level < 1 || level > config_.levels) {
      throw Error("model: item price level " + std::to_string(level) + " outside 1.." +
                  std::to_string(config_.levels));
    }
    levels0_.push_back(level - 1);
  }
}

template <typename T>
std::vector<typename Model<T>::ParamSpec> Model<T>::param_specs() const {
  const auto& c = config_;
  const Eigen::Index d = c.dim;
  const auto active = c.variant.active_types();
  std::vector<ParamSpec> specs;
  auto weight = [&](std::string name, Eigen::Index rows, Eigen::Index cols) {
    specs.push_back({std::move(name), rows, cols, ParamInit::kUniform});
  };
  auto bias = [&](std::string name) { specs.push_back({std::move(name), 1, d, ParamInit::kZero}); };

  const std::array<int, kNumNodeTypes> counts{c.n_items, c.levels, c.n_categories, c.n_brands};
  for (auto t : kAllNodeTypes) {
    if (active[type_index(t)]) weight(embedding_name(t), counts[type_index(t)], d);
  }
  weight("emb.position", c.max_len, d);

  if (!c.variant.gcn_aggregation) {
    for (auto t : kAllNodeTypes) {
      if (!active[type_index(t)]) continue;
      const auto others = other_types(active, t);
      if (others.empty()) continue;
      for (auto s : others) weight(conv_name("intra", t, s), d, d);
      weight(conv_name("fuse", t), d, d * static_cast<Eigen::Index>(others.size() + 1));
      for (auto s : others) weight(conv_name("gate", t, s), d, d);
    }
  }

  if (c.variant.price_branch()) {
    weight("price.enhance.W", d, 2 * d);
    bias("price.enhance.b");
    weight("price.query", d, d);
    weight("price.key", d, d);
    weight("price.value", d, d);
  }
  weight("interest.enhance.W", d, 2 * d);
  bias("interest.enhance.b");
  weight("interest.A1", d, d);
  weight("interest.A2", d, d);
  bias("interest.b");
  weight("interest.z", 1, d);

  if (c.variant.price_branch() && !c.variant.no_fusion) {
    weight("fusion.merge.price", d, d);
    weight("fusion.merge.interest", d, d);
    bias("fusion.merge.b");
    weight("fusion.price_gate.price", d, d);
    weight("fusion.price_gate.merge", d, d);
    weight("fusion.interest_gate.interest", d, d);
    weight("fusion.interest_gate.merge", d, d);
  }
  return specs;
}

template <typename T>
ParameterStore<T> Model<T>::init_params(std::uint64_t seed) const {
  ParameterStore<T> store;
  std::vector<std::pair<std::string, ParamInit>> plan;
  for (const auto& spec : param_specs()) {
    store.add(spec.name, spec.rows, spec.cols);
    plan.emplace_back(spec.name, spec.init);
  }
  initialize(store, plan, 1.0 / std::sqrt(static_cast<double>(config_.dim)), seed);
  return store;
}

template <typename T>
std::array<ad::Var<T>, kNumNodeTypes> Model<T>::step(
    ParamBinder<T>& bind, const NeighborIndex& index,
    const std::array<ad::Var<T>, kNumNodeTypes>& tables) const {
  const auto& v = config_.variant;
  const auto active = v.active_types();
  std::array<ad::Var<T>, kNumNodeTypes> next{};

  if (v.gcn_aggregation) {
    std::vector<ad::Var<T>> stacked_parts;
    for (auto t : kAllNodeTypes) {
      if (active[type_index(t)]) stacked_parts.push_back(tables[type_index(t)]);
    }
    ad::Var<T> stacked = stacked_parts.size() == 1 ? stacked_parts[0] : ad::vcat(stacked_parts);
    for (auto t : kAllNodeTypes) {
      const int ti = type_index(t);
      if (active[ti]) next[ti] = tables[ti] + ad::csr_mean(index.merged[ti], stacked);
    }
    return next;
  }

  for (auto t : kAllNodeTypes) {
    const int ti = type_index(t);
    if (!active[ti]) continue;
    const auto others = other_types(active, t);
    ad::Var<T> h = tables[ti];
    if (!others.empty()) {
      std::vector<ad::Var<T>> embeddings, gates;
      for (auto s : others) {
        const int si = type_index(s);
        embeddings.push_back(conv::intra_type_conv(index.adjacency[ti][si], tables[ti], tables[si],
                                                   bind(conv_name("intra", t, s))));
        gates.push_back(bind(conv_name("gate", t, s)));
      }
      h = conv::inter_type_conv(tables[ti], embeddings, bind(conv_name("fuse", t)), gates);
    }
    if (!v.no_cooccurrence) h = h + conv::cooccurrence_conv(index.adjacency[ti][ti], tables[ti]);
    next[ti] = h;
  }
  return next;
}

template <typename T>
void Model<T>::convolve(ParamBinder<T>& bind, const NeighborIndex& index, ForwardResult<T>& out) const {
  const auto active = config_.variant.active_types();
  for (auto t : kAllNodeTypes) {
    const int ti = type_index(t);
    if (active[ti] != index.active[ti]) throw Error("model: neighbor index built for other node types");
    if (active[ti]) out.initial[ti] = bind(embedding_name(t));
  }
  out.final = out.initial;
  for (int layer = 0; layer < config_.layers; ++layer) out.final = step(bind, index, out.final);
}

template <typename T>
void Model<T>::mine(ParamBinder<T>& bind, const SessionBatch& batch, ForwardResult<T>& out) const {
  const auto& v = config_.variant;
  if (batch.size() == 0) throw Error("empty batch");
  ad::Var<T> pos = ad::gather_rows(bind("emb.position"), batch.positions);

  ad::Var<T> raw_id = ad::gather_rows(out.final[type_index(NodeType::kId)], batch.items);
  ad::Var<T> enhanced_id =
      pref::position_enhance(raw_id, pos, bind("interest.enhance.W"), bind("interest.enhance.b"));
  out.interest_hat = pref::interest_preference(batch, enhanced_id, raw_id, bind("interest.A1"),
                                               bind("interest.A2"), bind("interest.b"),
                                               bind("interest.z"));
  out.interest = out.interest_hat;
  ad::Var<T> id_table = out.initial[type_index(NodeType::kId)];
  out.interest_logits = pref::table_logits(out.interest, id_table);

  if (!v.price_branch()) {
    out.scores = out.interest_logits;
    return;
  }
  ad::Var<T> raw_price = ad::gather_rows(out.final[type_index(NodeType::kPrice)], batch.price_nodes);
  ad::Var<T> enhanced_price =
      pref::position_enhance(raw_price, pos, bind("price.enhance.W"), bind("price.enhance.b"));
  out.price_hat = pref::price_preference(batch, enhanced_price, bind("price.query"), bind("price.key"),
                                         bind("price.value"), config_.heads);
  out.price = out.price_hat;
  if (!v.no_fusion) {
    pref::FusionParams<T> p{bind("fusion.merge.price"),       bind("fusion.merge.interest"),
                            bind("fusion.merge.b"),           bind("fusion.price_gate.price"),
                            bind("fusion.price_gate.merge"),  bind("fusion.interest_gate.interest"),
                            bind("fusion.interest_gate.merge")};
    auto fused = pref::fuse_preferences(out.price_hat, out.interest_hat, p);
    out.price = fused.price;
    out.interest = fused.interest;
    out.interest_logits = pref::table_logits(out.interest, id_table);
  }
  ad::Var<T> price_table = out.initial[type_index(NodeType::kPrice)];
  out.price_logits = pref::table_logits(out.price, price_table);
  out.scores = ad::gather_cols(out.price_logits, levels0_) + out.interest_logits;
}

template <typename T>
ForwardResult<T> Model<T>::forward(ParamBinder<T>& bind, const NeighborIndex& index,
                                   const SessionBatch& batch) const {
  ForwardResult<T> out;
  convolve(bind, index, out);
  mine(bind, batch, out);
  return out;
}

template <typename T>
ad::Var<T> Model<T>::loss(const ForwardResult<T>& out, const SessionBatch& batch, int* clamped) const {
  for (int target : batch.targets) {
    if (target < 0) throw Error("loss: batch contains a session without target");
  }
  const auto& v = config_.variant;
  if (!v.price_branch()) return ad::softmax_cross_entropy(out.interest_logits, batch.targets, clamped);
  if (v.single_loss) return ad::softmax_cross_entropy(out.scores, batch.targets, clamped);
  return ad::softmax_cross_entropy(out.interest_logits, batch.targets, clamped) +
         ad::softmax_cross_entropy(out.price_logits, batch.target_levels, clamped);
}

template <typename T>
SessionBatch Model<T>::make_batch(const std::vector<const Session*>& sessions) const {
  SessionBatch batch;
  for (const Session* s : sessions) batch.add(s->items, s->target, levels0_, config_.max_len);
  batch.finalize();
  return batch;
}

std::vector<int> top_k(std::span<const double> scores, int k) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  k = std::clamp(k, 0, static_cast<int>(order.size()));
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
  });
  order.resize(k);
  return order;
}

template <typename T>
std::vector<int> top_k_row(const Matrix<T>& scores, Eigen::Index row, int k) {
  std::vector<double> s(scores.cols());
  for (Eigen::Index j = 0; j < scores.cols(); ++j) s[j] = static_cast<double>(scores(row, j));
  return top_k(s, k);
}

namespace {

template <typename T>
bool all_finite(const Matrix<T>& m) {
  return m.allFinite();
}

/// Names the first non-finite tensor of a forward pass, in evaluation order.
template <typename T>
std::string first_non_finite(const ForwardResult<T>& out) {
  for (auto t : kAllNodeTypes) {
    const auto& f = out.final[type_index(t)];
    if (f.valid() && !all_finite(f.value())) return "convolution output (" + std::string(type_name(t)) + ")";
  }
  const std::pair<const char*, const ad::Var<T>*> named[] = {
      {"price preference", &out.price_hat}, {"interest preference", &out.interest_hat},
      {"fused price preference", &out.price}, {"fused interest preference", &out.interest},
      {"interest logits", &out.interest_logits}, {"price logits", &out.price_logits},
      {"item scores", &out.scores}};
  for (const auto& [name, var] : named) {
    if (var->valid() && !all_finite(var->value())) return name;
  }
  return "loss";
}

}  // namespace

template <typename T>
double loss_and_gradients(const Model<T>& model, ParameterStore<T>& store, const NeighborIndex& index,
                          const SessionBatch& batch, int* clamped) {
  ad::Tape<T> tape;
  ParamBinder<T> bind(tape, store, true);
  auto out = model.forward(bind, index, batch);
  auto loss = model.loss(out, batch, clamped);
  const double value = static_cast<double>(loss.value()(0, 0));
  if (!std::isfinite(value)) throw Error("non-finite loss: first non-finite tensor is " + first_non_finite(out));
  tape.backward(loss);
  store.zero_grad();
  bind.accumulate_grads(store);
  for (const auto& p : store.params()) {
    if (!all_finite(p.grad)) throw Error("non-finite gradient for parameter '" + p.name + "'");
  }
  return value;
}

template <typename T>
double evaluate_loss(const Model<T>& model, const ParameterStore<T>& store, const NeighborIndex& index,
                     const SessionBatch& batch) {
  ad::Tape<T> tape;
  ParamBinder<T> bind(tape, store, false);
  auto out = model.forward(bind, index, batch);
  return static_cast<double>(model.loss(out, batch).value()(0, 0));
}

template class Model<float>;
template class Model<double>;
template std::vector<int> top_k_row(const Matrix<float>&, Eigen::Index, int);
template std::vector<int> top_k_row(const Matrix<double>&, Eigen::Index, int);
template double loss_and_gradients(const Model<float>&, ParameterStore<float>&, const NeighborIndex&,
                                   const SessionBatch&, int*);
template double loss_and_gradients(const Model<double>&, ParameterStore<double>&, const NeighborIndex&,
                                   const SessionBatch&, int*);
template double evaluate_loss(const Model<float>&, const ParameterStore<float>&, const NeighborIndex&,
                              const SessionBatch&);
template double evaluate_loss(const Model<double>&, const ParameterStore<double>&, const NeighborIndex&,
                              const SessionBatch&);

}  // namespace hyperprice
