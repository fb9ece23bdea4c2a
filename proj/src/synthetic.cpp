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

#include "hyperprice/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <random>

#include "hyperprice/price_levels.hpp"
#include "hyperprice/serialize.hpp"

namespace hyperprice {

std::string_view band_name(PriceBand band) {
  switch (band) {
    case PriceBand::kLow: return "low";
    case PriceBand::kMid: return "mid";
    case PriceBand::kHigh: return "high";
  }
  return "?";
}

PriceBand band_of_level(int level, int rho) {
  const int edge = std::max(1, static_cast<int>(std::lround(0.4 * rho)));
  if (level <= edge) return PriceBand::kLow;
  if (level > rho - edge) return PriceBand::kHigh;
  return PriceBand::kMid;
}

namespace {

void check_config(const SyntheticConfig& c) {
  if (c.n_categories < 2) throw Error("synthetic: at least two categories required");
  if (c.n_brands < 1) throw Error("synthetic: at least one brand required");
  if (c.rho < 2) throw Error("synthetic: rho must be at least 2");
  if (c.n_items < 10 * c.n_categories || c.n_items < 10 * c.n_brands || c.n_items < 10 * c.rho) {
    throw Error("synthetic: too few items for every category, brand and level to hold 10 items");
  }
  if (c.n_sessions < 3) throw Error("synthetic: at least three sessions required");
  if (c.min_length < 2 || c.max_length < c.min_length) throw Error("synthetic: invalid session lengths");
  if (c.noise < 0.0 || c.noise > 1.0) throw Error("synthetic: noise must lie in [0, 1]");
  if (c.cluster_size < 1 || c.cluster_size > c.n_categories) throw Error("synthetic: invalid cluster size");
}

/// Draws from a logistic distribution with mean mu and standard deviation delta.
double draw_logistic(std::mt19937_64& rng, double mu, double delta) {
  std::uniform_real_distribution<double> u(1e-9, 1.0 - 1e-9);
  const double p = u(rng);
  return mu + std::sqrt(3.0) * delta / M_PI * std::log(p / (1.0 - p));
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticConfig& config) {
  check_config(config);
  SyntheticCorpus corpus;
  auto& truth = corpus.truth;
  truth.config = config;
  std::mt19937_64 rng(mix_seed(config.seed, 0x5e55));

  std::uniform_real_distribution<double> mu_dist(10.0, 200.0), spread(0.15, 0.35);
  for (int c = 0; c < config.n_categories; ++c) {
    const double mu = mu_dist(rng);
    truth.category_mu.push_back(mu);
    truth.category_delta.push_back(mu * spread(rng));
  }

  ItemCatalog catalog;
  catalog.levels = config.rho;
  for (int c = 0; c < config.n_categories; ++c) catalog.categories.push_back("c" + std::to_string(c));
  for (int b = 0; b < config.n_brands; ++b) catalog.brands.push_back("b" + std::to_string(b));
  std::uniform_int_distribution<int> brand_dist(0, config.n_brands - 1);
  for (int i = 0; i < config.n_items; ++i) {
    SyntheticItem item;
    item.id = "i" + std::to_string(i);
    item.category = i % config.n_categories;
    item.brand = brand_dist(rng);
    const double raw = draw_logistic(rng, truth.category_mu[item.category], truth.category_delta[item.category]);
    item.price = std::max(0.01, std::round(raw * 100.0) / 100.0);
    truth.items.push_back(item);
    catalog.items.push_back({item.id, item.price, item.category, item.brand, 0});
  }
  const auto levels = assign_levels(catalog, fit_level_scheme(catalog, config.rho));
  for (int i = 0; i < config.n_items; ++i) truth.items[i].level = levels[i];

  // One archetype per (run of consecutive categories, band) with at least two items.
  for (int c = 0; c < config.n_categories; ++c) {
    for (auto band : {PriceBand::kLow, PriceBand::kMid, PriceBand::kHigh}) {
      Archetype a;
      for (int j = 0; j < config.cluster_size; ++j) a.categories.push_back((c + j) % config.n_categories);
      a.band = band;
      for (int i = 0; i < config.n_items; ++i) {
        const auto& item = truth.items[i];
        const bool in_cluster =
            std::find(a.categories.begin(), a.categories.end(), item.category) != a.categories.end();
        if (in_cluster && band_of_level(item.level, config.rho) == band) a.pool.push_back(i);
      }
      if (a.pool.size() >= 2) truth.archetypes.push_back(std::move(a));
    }
  }
  if (truth.archetypes.empty()) throw Error("synthetic: no archetype has at least two items");

  // Skewed popularity inside every pool so that popularity baselines have something to find.
  std::vector<double> popularity(config.n_items);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& p : popularity) p = 1.0 / (1.0 + 4.0 * unit(rng));

  std::uniform_int_distribution<int> archetype_dist(0, static_cast<int>(truth.archetypes.size()) - 1);
  std::uniform_int_distribution<int> length_dist(config.min_length, config.max_length);
  std::uniform_int_distribution<int> any_item(0, config.n_items - 1);
  std::bernoulli_distribution off_archetype(config.noise);
  const std::int64_t base_time = 1'600'000'000;
  for (int s = 0; s < config.n_sessions; ++s) {
    const int a = archetype_dist(rng);
    truth.session_archetype.push_back(a);
    const auto& pool = truth.archetypes[a].pool;
    std::vector<double> weights;
    for (int i : pool) weights.push_back(popularity[i]);
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    const int length = length_dist(rng);
    for (int j = 0; j < length; ++j) {
      const int item = off_archetype(rng) ? any_item(rng) : pool[pick(rng)];
      const auto& it = truth.items[item];
      corpus.events.push_back({"s" + std::to_string(s), base_time + 600LL * s + 30LL * j, it.id, it.price,
                               catalog.categories[it.category], catalog.brands[it.brand]});
    }
  }
  return corpus;
}

void SyntheticTruth::write_json(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["format"] = "hyperprice-synthetic";
  j["version"] = 1;
  j["config"] = {{"n_items", config.n_items},       {"n_categories", config.n_categories},
                 {"n_brands", config.n_brands},     {"n_sessions", config.n_sessions},
                 {"rho", config.rho},               {"seed", config.seed},
                 {"min_length", config.min_length}, {"max_length", config.max_length},
                 {"noise", config.noise},           {"cluster_size", config.cluster_size}};
  auto& cats = j["categories"] = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < category_mu.size(); ++c) {
    cats.push_back({{"name", "c" + std::to_string(c)}, {"mu", category_mu[c]}, {"delta", category_delta[c]}});
  }
  auto& items_json = j["items"] = nlohmann::ordered_json::array();
  for (const auto& it : items) {
    items_json.push_back({{"id", it.id},
                          {"category", it.category},
                          {"brand", it.brand},
                          {"price", it.price},
                          {"level", it.level},
                          {"band", band_name(band_of_level(it.level, config.rho))}});
  }
  auto& arch = j["archetypes"] = nlohmann::ordered_json::array();
  for (const auto& a : archetypes) {
    arch.push_back({{"categories", a.categories}, {"band", band_name(a.band)}, {"pool", a.pool}});
  }
  j["session_archetype"] = session_archetype;
  out << j.dump(1) << '\n';
}

void write_events(std::ostream& out, const std::vector<Event>& events, char delimiter) {
  const char d = delimiter;
  out << "session" << d << "timestamp" << d << "item" << d << "price" << d << "category" << d << "brand\n";
  for (const auto& e : events) {
    out << e.session_key << d << e.timestamp << d << e.item_id << d << format_double(e.price) << d
        << e.category << d << e.brand << '\n';
  }
}

}  // namespace hyperprice
