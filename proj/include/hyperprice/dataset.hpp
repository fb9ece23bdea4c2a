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
#include <functional>
#include <istream>
#include <string>
#include <vector>

#include "hyperprice/common.hpp"

namespace hyperprice {

inline constexpr std::string_view kUnknown = "UNKNOWN";

struct Event {
  std::string session_key;
  std::int64_t timestamp = 0;
  std::string item_id;
  double price = 0.0;
  std::string category;
  std::string brand;
};

/// How raw rows are grouped into sessions.
enum class SessionKeying {
  kSessionColumn,  // the `session` column is a session id (Cosmetics-style logs)
  kUserDay,        // the `session` column is a user id; key = (user, UTC calendar day)
};

struct EventSchema {
  char delimiter = ',';
  SessionKeying keying = SessionKeying::kSessionColumn;
};

struct CatalogItem {
  std::string raw_id;
  double price = 0.0;
  int category = 0;
  int brand = 0;
  int price_level = 0;  // 1..rho once assigned, 0 before
};

struct ItemCatalog {
  std::vector<CatalogItem> items;
  std::vector<std::string> categories;
  std::vector<std::string> brands;
  int levels = 0;  // rho; 0 until levels are assigned

  int size() const { return static_cast<int>(items.size()); }
  int find(std::string_view raw_id) const;  // -1 when absent
};

struct Session {
  std::string key;
  std::vector<int> items;  // input prefix, chronological
  int target = -1;         // last item
  std::vector<std::int64_t> timestamps;  // one per item of prefix + target

  std::int64_t last_time() const { return timestamps.empty() ? 0 : timestamps.back(); }
  /// Prefix followed by the target.
  std::vector<int> sequence() const;
};

enum class SplitTag { kAll, kTrain, kValid, kTest };

struct SessionSet {
  std::vector<Session> sessions;
  ItemCatalog catalog;
  SplitTag tag = SplitTag::kAll;

  std::size_t interactions() const;
};

/// Parses delimiter-separated events with header `session,timestamp,item,price,category,brand`.
/// Columns may appear in any order. Empty category/brand cells become "UNKNOWN".
std::vector<Event> parse_events(std::istream& in, const EventSchema& schema = {});

/// Groups events into sessions, sorts each by timestamp, drops single-item sessions and
/// keeps the most recent max_len + 1 events of longer ones.
SessionSet build_sessions(const std::vector<Event>& events, int max_len = 19);

/// Assigns a price level (1..rho) to every catalog item. Must return one level per item.
using LevelAssigner = std::function<std::vector<int>(const ItemCatalog&)>;

/// Iterative k-core filter over items, categories, brands and (when `assign_levels` is
/// given) price levels. Runs to a fixpoint and re-indexes the catalog densely.
SessionSet apply_core_filter(const SessionSet& set, int min_count = 10,
                             const LevelAssigner& assign_levels = {});

/// Chronological split by each session's last event time, floor for train/valid.
std::array<SessionSet, 3> chronological_split(const SessionSet& set,
                                              std::array<double, 3> ratios = {0.7, 0.2, 0.1});

/// Train/valid/test sharing one catalog.
struct SplitDataset {
  ItemCatalog catalog;
  std::array<SessionSet, 3> splits;

  const SessionSet& train() const { return splits[0]; }
  const SessionSet& valid() const { return splits[1]; }
  const SessionSet& test() const { return splits[2]; }
};

/// Corpus statistics in the layout of the usual dataset table.
struct CorpusStats {
  int items = 0;
  int price_levels = 0;
  int categories = 0;
  int brands = 0;
  std::size_t interactions = 0;
  std::size_t sessions = 0;
  double avg_length = 0.0;
};

CorpusStats corpus_stats(const SplitDataset& data);

}  // namespace hyperprice
