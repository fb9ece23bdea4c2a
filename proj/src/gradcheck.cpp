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

#include "hyperprice/gradcheck.hpp"

#include <random>

#include "hyperprice/model.hpp"

namespace hyperprice {

GradCheckReport tiny_model_gradcheck(const TinyCheckConfig& config) {
  ItemCatalog catalog;
  catalog.categories = {"c0", "c1"};
  catalog.brands = {"b0", "b1"};
  catalog.levels = 3;
  catalog.items = {{"i0", 1.0, 0, 0, 1}, {"i1", 5.0, 1, 1, 2}, {"i2", 9.0, 0, 1, 3}};

  SessionSet train;
  train.catalog = catalog;
  train.tag = SplitTag::kTrain;
  train.sessions.push_back({"s0", {0, 1}, 2, {1, 2, 3}});

  ModelConfig mc;
  mc.dim = config.dim;
  mc.heads = config.heads;
  mc.layers = config.layers;
  mc.levels = catalog.levels;
  mc.n_items = catalog.size();
  mc.n_categories = 2;
  mc.n_brands = 2;
  mc.max_len = 3;
  mc.graph_seed = config.seed;
  mc.variant = parse_variant(config.variant);
  mc.validate();

  const auto seen = variant_catalog(catalog, mc.variant);
  train.catalog = seen;
  std::vector<int> levels;
  for (const auto& it : seen.items) levels.push_back(it.price_level);
  const auto graph = HeteroHypergraph::build(train, seen);
  const auto index = NeighborIndex::build(graph, mc.variant.active_types(), mc.neighbor_cap, mc.graph_seed);
  const Model<double> model(mc, levels);
  auto store = model.init_params(config.seed);
  std::mt19937_64 rng(mix_seed(config.seed, 0x6772616463686bULL));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& p : store.params()) {
    for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value.data()[i] = u(rng);
  }
  const auto batch = model.make_batch({&train.sessions[0]});
  loss_and_gradients(model, store, index, batch);
  return finite_difference_check(store, [&] { return evaluate_loss(model, store, index, batch); }, config.step,
                                 config.abs_floor);
}

}  // namespace hyperprice
