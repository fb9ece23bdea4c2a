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
#include <string>
#include <vector>

#include "hyperprice/dataset.hpp"

namespace hyperprice {

struct SyntheticConfig {
  int n_items = 200;
  int n_categories = 8;
  int n_brands = 10;
  int n_sessions = 5000;
  int rho = 5;
  std::uint64_t seed = 7;
  int min_length = 2;       // prefix + target
  int max_length = 3;
  double noise = 0.05;      // probability of an off-archetype item
  int cluster_size = 2;     // consecutive categories per archetype
};

enum class PriceBand { kLow, kMid, kHigh };

std::string_view band_name(PriceBand band);

/// Band of a 1-based level: the bottom and top round(0.4 rho) levels are low and high.
PriceBand band_of_level(int level, int rho);

struct SyntheticItem {
  std::string id;
  int category = 0;
  int brand = 0;
  double price = 0.0;
  int level = 0;  // 1-based, from the logistic scheme fitted on the generated catalog
};

struct Archetype {
  std::vector<int> categories;
  PriceBand band = PriceBand::kLow;
  std::vector<int> pool;  // items matching both
};

/// Ground truth of a generated corpus.
struct SyntheticTruth {
  SyntheticConfig config;
  std::vector<double> category_mu, category_delta;
  std::vector<SyntheticItem> items;
  std::vector<Archetype> archetypes;
  std::vector<int> session_archetype;

  void write_json(std::ostream& out) const;
};

struct SyntheticCorpus {
  std::vector<Event> events;
  SyntheticTruth truth;
};

/// Sessions drawn from latent archetypes, each tied to a pair of categories and a price band.
/// Item prices follow a per-category logistic distribution. Deterministic given the seed.
SyntheticCorpus generate_synthetic(const SyntheticConfig& config);

/// Writes events with the standard header `session,timestamp,item,price,category,brand`.
void write_events(std::ostream& out, const std::vector<Event>& events, char delimiter = ',');

}  // namespace hyperprice
