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

#include "hyperprice/training.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hyperprice/serialize.hpp"

namespace hyperprice {

ModelConfig resolve_config(ModelConfig config, const SplitDataset& data) {
  const auto& c = data.catalog;
  config.levels = c.levels;
  config.n_items = c.size();
  config.n_categories = static_cast<int>(c.categories.size());
  config.n_brands = static_cast<int>(c.brands.size());
  config.validate();
  return config;
}

ModelContext build_context(const ModelConfig& resolved, const SplitDataset& data) {
  ModelContext ctx;
  ctx.catalog = variant_catalog(data.catalog, resolved.variant);
  ctx.graph = HeteroHypergraph::build(data.train(), ctx.catalog);
  ctx.index = NeighborIndex::build(ctx.graph, resolved.variant.active_types(), resolved.neighbor_cap,
                                   resolved.graph_seed);
  std::vector<int> levels;
  levels.reserve(ctx.catalog.items.size());
  for (const auto& it : ctx.catalog.items) levels.push_back(it.price_level);
  ctx.model = std::make_unique<Model<float>>(resolved, std::move(levels));
  return ctx;
}

TrainResult train(const TrainConfig& config, const SplitDataset& data) {
  if (data.train().sessions.empty()) throw Error("training split is empty");
  if (config.batch_size < 1) throw Error("batch size must be positive");
  if (config.epochs < 1) throw Error("at least one epoch required");
  if (config.workers > 0) omp_set_num_threads(config.workers);

  ModelConfig mc = config.model;
  mc.graph_seed = config.seed;
  mc = resolve_config(mc, data);
  auto ctx = build_context(mc, data);
  const auto& model = *ctx.model;
  auto store = model.init_params(config.seed);
  AdamConfig adam;
  adam.learning_rate = config.learning_rate;

  TrainResult result;
  result.best.config = mc;
  result.best.metadata = {{"seed", std::to_string(config.seed)},
                          {"variant", variant_name(mc.variant)},
                          {"epochs", std::to_string(config.epochs)},
                          {"batch_size", std::to_string(config.batch_size)},
                          {"learning_rate", format_double(config.learning_rate)},
                          {"deterministic", config.deterministic ? "true" : "false"}};
  double best_score = -1.0;
  const auto& sessions = data.train().sessions;
  std::vector<std::size_t> order(sessions.size());

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(config.seed ^ static_cast<std::uint64_t>(epoch));
    std::shuffle(order.begin(), order.end(), rng);

    EpochRecord rec;
    rec.epoch = epoch;
    double loss_sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<const Session*> chunk;
      for (std::size_t i = start; i < end; ++i) chunk.push_back(&sessions[order[i]]);
      const auto batch = model.make_batch(chunk);
      double loss = 0.0;
      try {
        loss = loss_and_gradients(model, store, ctx.index, batch, &rec.clamped);
      } catch (const Error& e) {
        throw Error("epoch " + std::to_string(epoch) + ", batch starting at " + std::to_string(start) + ": " +
                    e.what());
      }
      adam_step(store, adam);
      loss_sum += loss * static_cast<double>(chunk.size());
      counted += chunk.size();
    }
    rec.train_loss = loss_sum / static_cast<double>(counted);

    double score = 0.0;
    if (!data.valid().sessions.empty()) {
      const auto ranked = rank_with_model(model, store, ctx.index, data.valid(), config.select_k,
                                          config.batch_size);
      rec.valid_prec = prec_at_k(ranked, config.select_k);
      rec.valid_mrr = mrr_at_k(ranked, config.select_k);
      score = rec.valid_prec;
    }
    if (config.log) {
      *config.log << "epoch " << epoch << " loss " << rec.train_loss << " valid P@" << config.select_k << ' '
                  << rec.valid_prec << " MRR@" << config.select_k << ' ' << rec.valid_mrr;
      if (rec.clamped) *config.log << " clamped " << rec.clamped;
      *config.log << std::endl;
    }
    result.history.push_back(rec);
    // Without a validation split the last epoch wins.
    if (data.valid().sessions.empty() || score > best_score) {
      best_score = score;
      result.best_epoch = epoch;
      result.best.params = store;
    }
  }
  result.best.metadata["best_epoch"] = std::to_string(result.best_epoch);
  return result;
}

void write_history(std::ostream& out, const std::vector<EpochRecord>& history, int select_k) {
  out << "epoch,train_loss,valid_prec" << select_k << ",valid_mrr" << select_k << ",clamped\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << format_double(r.train_loss) << ',' << format_double(r.valid_prec) << ','
        << format_double(r.valid_mrr) << ',' << r.clamped << '\n';
  }
}

std::vector<AblationRow> run_ablation(const TrainConfig& base, const std::vector<std::string>& variants,
                                      const SplitDataset& data, const std::vector<int>& ks, int repeats) {
  if (data.test().sessions.empty()) throw Error("ablation needs a non-empty test split");
  if (ks.empty()) throw Error("ablation needs at least one k");
  if (repeats < 1) throw Error("ablation needs at least one repeat");
  const int k_max = *std::max_element(ks.begin(), ks.end());
  std::vector<AblationRow> rows;
  for (const auto& name : variants) {
    AblationRow row{name, {}, 0};
    for (int r = 0; r < repeats; ++r) {
      TrainConfig cfg = base;
      cfg.model.variant = parse_variant(name);
      cfg.seed = base.seed + static_cast<std::uint64_t>(r);
      if (cfg.log) *cfg.log << "variant " << name << " seed " << cfg.seed << std::endl;
      auto trained = train(cfg, data);
      const auto ctx = build_context(trained.best.config, data);
      const auto ranked = rank_with_model(*ctx.model, trained.best.params, ctx.index, data.test(), k_max,
                                          cfg.batch_size);
      auto metrics = metric_rows("hyperprice", name, ranked, ks);
      if (r == 0) {
        row.metrics = std::move(metrics);
        row.best_epoch = trained.best_epoch;
      } else {
        for (std::size_t i = 0; i < metrics.size(); ++i) {
          row.metrics[i].prec += metrics[i].prec;
          row.metrics[i].mrr += metrics[i].mrr;
        }
      }
    }
    for (auto& m : row.metrics) {
      m.prec /= repeats;
      m.mrr /= repeats;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_ablation_table(std::ostream& out, const std::vector<AblationRow>& rows) {
  out << "variant,k,Prec,MRR,best_epoch\n";
  for (const auto& row : rows) {
    for (const auto& m : row.metrics) {
      out << row.variant << ',' << m.k << ',' << format_double(m.prec) << ',' << format_double(m.mrr) << ','
          << row.best_epoch << '\n';
    }
  }
}

}  // namespace hyperprice
