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

#include "hyperprice/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "hyperprice/serialize.hpp"

namespace hyperprice {

int target_rank(const RankedResult& r) {
  for (std::size_t i = 0; i < r.ranking.size(); ++i) {
    if (r.ranking[i] == r.target) return static_cast<int>(i) + 1;
  }
  return 0;
}

namespace {

void check_results(std::span<const RankedResult> results, int k) {
  if (results.empty()) throw Error("metrics need at least one result");
  if (k < 1) throw Error("metrics need k >= 1");
  for (const auto& r : results) {
    if (static_cast<int>(r.ranking.size()) < k) throw Error("ranking shorter than k");
  }
}

/// Orders `items` by descending key, then ascending index.
template <typename Key>
void sort_by_key(std::vector<int>& items, const Key& key) {
  std::sort(items.begin(), items.end(), [&](int a, int b) {
    const auto ka = key(a), kb = key(b);
    return ka != kb ? ka > kb : a < b;
  });
}

}  // namespace

double prec_at_k(std::span<const RankedResult> results, int k) {
  check_results(results, k);
  std::size_t hits = 0;
  for (const auto& r : results) {
    const int rank = target_rank(r);
    if (rank >= 1 && rank <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

double mrr_at_k(std::span<const RankedResult> results, int k) {
  check_results(results, k);
  double total = 0.0;
  for (const auto& r : results) {
    const int rank = target_rank(r);
    if (rank >= 1 && rank <= k) total += 1.0 / rank;
  }
  return total / static_cast<double>(results.size());
}

std::vector<int> item_popularity(const SessionSet& train, int n_items) {
  std::vector<int> pop(n_items, 0);
  for (const auto& s : train.sessions) {
    for (int item : s.sequence()) ++pop.at(item);
  }
  return pop;
}

std::vector<int> s_pop(const std::vector<int>& prefix, const std::vector<int>& popularity, int k) {
  if (prefix.empty()) throw Error("s_pop needs a non-empty prefix");
  const int n = static_cast<int>(popularity.size());
  std::map<int, int> freq;
  for (int item : prefix) ++freq[item];
  std::vector<int> in_session;
  for (const auto& [item, count] : freq) in_session.push_back(item);
  sort_by_key(in_session, [&](int i) { return std::pair(freq[i], popularity[i]); });
  std::vector<int> rest;
  for (int i = 0; i < n; ++i) {
    if (!freq.count(i)) rest.push_back(i);
  }
  sort_by_key(rest, [&](int i) { return popularity[i]; });
  in_session.insert(in_session.end(), rest.begin(), rest.end());
  in_session.resize(std::min<std::size_t>(in_session.size(), static_cast<std::size_t>(k)));
  return in_session;
}

SknnRanker::SknnRanker(const SessionSet& train, int n_items, int neighbors)
    : n_items_(n_items), neighbors_(neighbors), item_sessions_(n_items),
      popularity_(item_popularity(train, n_items)) {
  if (neighbors < 1) throw Error("sknn needs at least one neighbor");
  for (const auto& s : train.sessions) {
    auto items = s.sequence();
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    const int id = static_cast<int>(sessions_.size());
    for (int item : items) item_sessions_.at(item).push_back(id);
    sessions_.push_back(std::move(items));
  }
}

double SknnRanker::cosine(std::span<const int> a, std::span<const int> b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common, ++ia, ++ib;
    }
  }
  return static_cast<double>(common) / std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

std::vector<int> SknnRanker::rank(const std::vector<int>& prefix, int k) const {
  std::vector<int> query = prefix;
  std::sort(query.begin(), query.end());
  query.erase(std::unique(query.begin(), query.end()), query.end());

  std::vector<int> candidates;
  for (int item : query) {
    if (item >= 0 && item < n_items_) {
      candidates.insert(candidates.end(), item_sessions_[item].begin(), item_sessions_[item].end());
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<int> order(n_items_);
  std::iota(order.begin(), order.end(), 0);
  if (candidates.empty()) {
    sort_by_key(order, [&](int i) { return popularity_[i]; });
  } else {
    std::vector<std::pair<double, int>> sims;
    sims.reserve(candidates.size());
    for (int s : candidates) sims.emplace_back(cosine(query, sessions_[s]), s);
    std::sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (static_cast<int>(sims.size()) > neighbors_) sims.resize(neighbors_);
    std::vector<double> score(n_items_, 0.0);
    for (const auto& [sim, s] : sims) {
      for (int item : sessions_[s]) score[item] += sim;
    }
    sort_by_key(order, [&](int i) { return score[i]; });
  }
  order.resize(std::min(n_items_, k));
  return order;
}

std::vector<int> random_ranking(int n_items, int k, std::uint64_t seed, std::size_t session) {
  std::vector<int> order(n_items);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(mix_seed(seed, session));
  const int m = std::min(n_items, k);
  for (int i = 0; i < m; ++i) {
    std::uniform_int_distribution<int> pick(i, n_items - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  order.resize(m);
  return order;
}

std::vector<RankedResult> rank_with_model(const Model<float>& model, const ParameterStore<float>& params,
                                          const NeighborIndex& index, const SessionSet& set, int k,
                                          int batch_size) {
  if (batch_size < 1) throw Error("batch size must be positive");
  // Convolve once; every batch then starts from constant copies of the tables.
  std::array<Matrix<float>, kNumNodeTypes> initial, final;
  {
    ad::Tape<float> tape;
    ParamBinder<float> bind(tape, params, false);
    ForwardResult<float> conv;
    model.convolve(bind, index, conv);
    for (int t = 0; t < kNumNodeTypes; ++t) {
      if (conv.initial[t].valid()) {
        initial[t] = conv.initial[t].value();
        final[t] = conv.final[t].value();
      }
    }
  }
  const auto& levels0 = model.item_levels();
  std::vector<RankedResult> results;
  results.reserve(set.sessions.size());
  for (std::size_t start = 0; start < set.sessions.size(); start += batch_size) {
    const std::size_t end = std::min(set.sessions.size(), start + batch_size);
    std::vector<const Session*> chunk;
    for (std::size_t i = start; i < end; ++i) chunk.push_back(&set.sessions[i]);
    const auto batch = model.make_batch(chunk);
    ad::Tape<float> tape;
    ParamBinder<float> bind(tape, params, false);
    ForwardResult<float> out;
    for (int t = 0; t < kNumNodeTypes; ++t) {
      if (initial[t].size() == 0) continue;
      out.initial[t] = bind(embedding_name(kAllNodeTypes[t]));
      out.final[t] = tape.constant(final[t]);
    }
    model.mine(bind, batch, out);
    const auto& scores = out.scores.value();
    for (int s = 0; s < batch.size(); ++s) {
      const Session& sess = *chunk[s];
      RankedResult r;
      r.ranking = top_k_row(scores, s, k);
      r.target = sess.target;
      r.target_level = sess.target >= 0 ? levels0[sess.target] + 1 : 0;
      r.prefix_length = static_cast<int>(sess.items.size());
      results.push_back(std::move(r));
    }
  }
  return results;
}

std::vector<MetricRow> metric_rows(const std::string& model, const std::string& variant,
                                   std::span<const RankedResult> results, const std::vector<int>& ks) {
  std::vector<MetricRow> rows;
  for (int k : ks) rows.push_back({model, variant, k, prec_at_k(results, k), mrr_at_k(results, k), results.size()});
  return rows;
}

std::vector<BreakdownRow> breakdown(const std::string& model, const std::string& group,
                                    std::span<const RankedResult> results, const std::vector<int>& ks) {
  const bool by_level = group == "level";
  if (!by_level && group != "length") throw Error("unknown breakdown '" + group + "'");
  std::map<int, std::vector<RankedResult>> groups;
  for (const auto& r : results) groups[by_level ? r.target_level : r.prefix_length].push_back(r);
  std::vector<BreakdownRow> rows;
  for (const auto& [value, part] : groups) {
    for (int k : ks) rows.push_back({model, group, value, k, prec_at_k(part, k), mrr_at_k(part, k), part.size()});
  }
  return rows;
}

void write_metric_rows(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << "model,variant,k,Prec,MRR,sessions\n";
  for (const auto& r : rows) {
    out << r.model << ',' << r.variant << ',' << r.k << ',' << format_double(r.prec) << ','
        << format_double(r.mrr) << ',' << r.sessions << '\n';
  }
}

void write_breakdown_rows(std::ostream& out, const std::vector<BreakdownRow>& rows) {
  out << "model,group,value,k,Prec,MRR,sessions\n";
  for (const auto& r : rows) {
    out << r.model << ',' << r.group << ',' << r.value << ',' << r.k << ',' << format_double(r.prec) << ','
        << format_double(r.mrr) << ',' << r.sessions << '\n';
  }
}

}  // namespace hyperprice
