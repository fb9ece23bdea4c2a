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

// Versioned text artifacts: preprocessed datasets, level tables and statistics reports.
//
// Dataset file layout (tab-separated, one record per line):
//   hyperprice-dataset <version>
//   levels <rho>
//   categories <n>      followed by n names
//   brands <n>          followed by n names
//   items <n>           followed by: raw_id price category brand level
//   split <name> <n>    followed by: key length item... timestamp...   (prefix + target)

#include <istream>
#include <ostream>
#include <string>

#include "hyperprice/dataset.hpp"
#include "hyperprice/price_levels.hpp"

namespace hyperprice {

inline constexpr int kDatasetFormatVersion = 1;

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

void write_dataset(std::ostream& out, const SplitDataset& data);
/// Rejects other formats and versions.
SplitDataset read_dataset(std::istream& in);

void save_dataset(const std::string& path, const SplitDataset& data);
SplitDataset load_dataset(const std::string& path);

/// Per-category fit table: category,items,mu,delta,min,max,flagged,degenerate,cut_1..cut_{rho-1}.
void write_level_table(std::ostream& out, const ItemCatalog& catalog, const LevelScheme& scheme);
/// Per-item levels: item,category,brand,price,level.
void write_item_levels(std::ostream& out, const ItemCatalog& catalog);
/// Statistics as `key,value` lines.
void write_stats(std::ostream& out, const CorpusStats& stats);

}  // namespace hyperprice
