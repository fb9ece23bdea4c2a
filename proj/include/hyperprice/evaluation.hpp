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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hyperprice/dataset.hpp"
#include "hyperprice/model.hpp"

namespace hyperprice {

/// One ranked test session.
struct RankedResult {
  std::vector<int> ranking;  // top items, best first
  int target = -1;
  int target_level = 0;  // 1-based
  int prefix_length = 0;
};

/// 1-based rank of the target inside the ranking, 0 when absent.
int target_rank(const RankedResult& r);

double prec_at_k(std::span<const RankedResult> results, int k);
double mrr_at_k(std::span<const RankedResult> results, int k);

/// Occurrences of every item across training sessions (prefix and target).
std::vector<int> item_popularity(const SessionSet& train, int n_items);

/// In-session frequency, then global popularity, then item index; the rest of the catalog
/// follows by global popularity. Returns the first `k` items.
std::vector<int> s_pop(const std::vector<int>& prefix, const std::vector<int>& popularity, int k);

/// Session k-nearest neighbors with cosine similarity on binary item sets.
class SknnRanker {
 public:
  SknnRanker(const SessionSet& train, int n_items, int neighbors = 500);
  std::vector<int> rank(const std::vector<int>& prefix, int k) const;
  /// Cosine similarity of two sorted unique item sets.
  static double cosine(std::span<const int> a, std::span<const int> b);

 private:
  int n_items_;
  int neighbors_;
  std::vector<std::vector<int>> sessions_;      // sorted unique items
  std::vector<std::vector<int>> item_sessions_; // inverted index
  std::vector<int> popularity_;
};

/// Uniformly random ranking, seeded per session index.
std::vector<int> random_ranking(int n_items, int k, std::uint64_t seed, std::size_t session);

/// Ranks every session of `set` with a trained model (ties broken by item index).
std::vector<RankedResult> rank_with_model(const Model<float>& model, const ParameterStore<float>& params,
                                          const NeighborIndex& index, const SessionSet& set, int k,
                                          int batch_size = 100);

struct MetricRow {
  std::string model;
  std::string variant;
  int k = 0;
  double prec = 0.0;
  double mrr = 0.0;
  std::size_t sessions = 0;
};

struct BreakdownRow {
  std::string model;
  std::string group;  // "level" or "length"
  int value = 0;
  int k = 0;
  double prec = 0.0;
  double mrr = 0.0;
  std::size_t sessions = 0;
};

std::vector<MetricRow> metric_rows(const std::string& model, const std::string& variant,
                                   std::span<const RankedResult> results, const std::vector<int>& ks);
/// Groups by target level or prefix length; one row per observed value and k.
std::vector<BreakdownRow> breakdown(const std::string& model, const std::string& group,
                                    std::span<const RankedResult> results, const std::vector<int>& ks);

void write_metric_rows(std::ostream& out, const std::vector<MetricRow>& rows);
void write_breakdown_rows(std::ostream& out, const std::vector<BreakdownRow>& rows);

}  // namespace hyperprice
