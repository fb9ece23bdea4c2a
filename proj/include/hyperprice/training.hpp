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

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "hyperprice/checkpoint.hpp"
#include "hyperprice/evaluation.hpp"
#include "hyperprice/hypergraph.hpp"
#include "hyperprice/model.hpp"

namespace hyperprice {

struct TrainConfig {
  ModelConfig model;  // dim, heads, layers, max_len, neighbor_cap and variant are read
  int batch_size = 100;
  double learning_rate = 1e-3;
  int epochs = 30;
  std::uint64_t seed = 42;
  bool deterministic = true;  // kernels sum in a fixed per-row order either way; recorded in metadata
  int workers = 0;      // OpenMP threads; 0 keeps the runtime default
  int select_k = 20;    // validation Prec@k used for model selection
  std::ostream* log = nullptr;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_prec = 0.0;
  double valid_mrr = 0.0;
  int clamped = 0;
};

/// Everything derived from a dataset and a model configuration.
struct ModelContext {
  ItemCatalog catalog;  // levels as seen by the variant
  HeteroHypergraph graph;
  NeighborIndex index;
  std::unique_ptr<Model<float>> model;
};

/// Fills the data-dependent fields of `config` (levels, catalog sizes) from `data`.
ModelConfig resolve_config(ModelConfig config, const SplitDataset& data);
/// Builds the graph over the training split, the neighbor index and the model.
ModelContext build_context(const ModelConfig& resolved, const SplitDataset& data);

struct TrainResult {
  Checkpoint best;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

/// Shuffled mini-batch Adam training; keeps the parameters with the best validation Prec@k.
TrainResult train(const TrainConfig& config, const SplitDataset& data);

/// One line per epoch: epoch,train_loss,valid_prec,valid_mrr,clamped.
void write_history(std::ostream& out, const std::vector<EpochRecord>& history, int select_k = 20);

struct AblationRow {
  std::string variant;
  std::vector<MetricRow> metrics;
  int best_epoch = 0;
};

/// Trains every variant on the same data and evaluates on the test split. With `repeats` > 1
/// each variant is trained with seeds base.seed .. base.seed + repeats - 1 and the metrics are
/// averaged; best_epoch is that of the first seed.
std::vector<AblationRow> run_ablation(const TrainConfig& base, const std::vector<std::string>& variants,
                                      const SplitDataset& data, const std::vector<int>& ks = {10, 20},
                                      int repeats = 1);

/// Results table: variant,k,Prec,MRR.
void write_ablation_table(std::ostream& out, const std::vector<AblationRow>& rows);

}  // namespace hyperprice
