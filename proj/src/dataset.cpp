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

#include "hyperprice/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace hyperprice {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

template <typename V>
bool parse_number(std::string_view s, V& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

int ItemCatalog::find(std::string_view raw_id) const {
  for (int i = 0; i < size(); ++i) {
    if (items[i].raw_id == raw_id) return i;
  }
  return -1;
}

std::vector<int> Session::sequence() const {
  std::vector<int> seq = items;
  seq.push_back(target);
  return seq;
}

std::size_t SessionSet::interactions() const {
  std::size_t n = 0;
  for (const auto& s : sessions) n += s.items.size() + 1;
  return n;
}

std::vector<Event> parse_events(std::istream& in, const EventSchema& schema) {
  static constexpr std::array<std::string_view, 6> kFields = {"session", "timestamp", "item",
                                                               "price",   "category",  "brand"};
  std::string line;
  if (!std::getline(in, line)) throw Error("missing header line");
  auto header = split(line, schema.delimiter);
  std::array<int, 6> column{};
  for (std::size_t f = 0; f < kFields.size(); ++f) {
    auto it = std::find(header.begin(), header.end(), kFields[f]);
    if (it == header.end()) throw Error("header lacks field '" + std::string(kFields[f]) + "'");
    column[f] = static_cast<int>(it - header.begin());
  }

  std::vector<Event> events;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line, schema.delimiter);
    const auto where = " at line " + std::to_string(line_no);
    if (cells.size() != header.size()) throw Error("malformed row" + where);

    Event e;
    std::string_view session = cells[column[0]];
    if (session.empty()) throw Error("empty session key" + where);
    if (!parse_number(cells[column[1]], e.timestamp)) throw Error("malformed timestamp" + where);
    e.item_id = std::string(cells[column[2]]);
    if (e.item_id.empty()) throw Error("empty item id" + where);
    if (!parse_number(cells[column[3]], e.price) || !std::isfinite(e.price)) {
      throw Error("malformed price" + where);
    }
    if (e.price < 0.0) throw Error("negative price" + where);
    auto category = cells[column[4]];
    auto brand = cells[column[5]];
    e.category = category.empty() ? std::string(kUnknown) : std::string(category);
    e.brand = brand.empty() ? std::string(kUnknown) : std::string(brand);

    if (schema.keying == SessionKeying::kUserDay) {
      e.session_key = std::string(session) + "#" + std::to_string(floor_div(e.timestamp, 86400));
    } else {
      e.session_key = std::string(session);
    }
    events.push_back(std::move(e));
  }
  return events;
}

SessionSet build_sessions(const std::vector<Event>& events, int max_len) {
  if (max_len < 1) throw Error("max_len must be positive");

  // Features come from the first occurrence of each item in input order.
  std::unordered_map<std::string, std::size_t> first_seen;
  std::unordered_map<std::string, std::size_t> key_index;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < events.size(); ++i) {
    first_seen.try_emplace(events[i].item_id, i);
    auto [it, inserted] = key_index.try_emplace(events[i].session_key, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }

  SessionSet out;
  std::unordered_map<std::string, int> item_index, category_index, brand_index;
  auto intern = [](std::unordered_map<std::string, int>& map, std::vector<std::string>& names,
                   const std::string& name) {
    auto [it, inserted] = map.try_emplace(name, static_cast<int>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  };
  auto register_item = [&](const std::string& raw) {
    auto it = item_index.find(raw);
    if (it != item_index.end()) return it->second;
    const Event& src = events[first_seen.at(raw)];
    CatalogItem item;
    item.raw_id = raw;
    item.price = src.price;
    item.category = intern(category_index, out.catalog.categories, src.category);
    item.brand = intern(brand_index, out.catalog.brands, src.brand);
    int idx = out.catalog.size();
    out.catalog.items.push_back(std::move(item));
    item_index.emplace(raw, idx);
    return idx;
  };

  for (auto& group : groups) {
    if (group.size() < 2) continue;
    std::stable_sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
      return events[a].timestamp < events[b].timestamp;
    });
    const std::size_t keep = static_cast<std::size_t>(max_len) + 1;
    std::size_t first = group.size() > keep ? group.size() - keep : 0;

    Session s;
    s.key = events[group.front()].session_key;
    for (std::size_t j = first; j < group.size(); ++j) {
      const Event& e = events[group[j]];
      s.items.push_back(register_item(e.item_id));
      s.timestamps.push_back(e.timestamp);
    }
    s.target = s.items.back();
    s.items.pop_back();
    out.sessions.push_back(std::move(s));
  }
  return out;
}

SessionSet apply_core_filter(const SessionSet& set, int min_count,
                             const LevelAssigner& assign_levels) {
  const ItemCatalog& catalog = set.catalog;
  const int n = catalog.size();
  std::vector<char> alive(n, 1);

  struct Seq {
    std::string key;
    std::vector<int> items;
    std::vector<std::int64_t> times;
  };
  std::vector<Seq> seqs;
  seqs.reserve(set.sessions.size());
  for (const auto& s : set.sessions) seqs.push_back({s.key, s.sequence(), s.timestamps});

  auto subset_catalog = [&](const std::vector<int>& members) {
    ItemCatalog sub;
    sub.categories = catalog.categories;
    sub.brands = catalog.brands;
    for (int i : members) sub.items.push_back(catalog.items[i]);
    return sub;
  };

  bool changed = true;
  while (changed) {
    changed = false;

    std::vector<int> occurrences(n, 0);
    for (const auto& s : seqs)
      for (int i : s.items) ++occurrences[i];
    for (int i = 0; i < n; ++i) {
      if (alive[i] && occurrences[i] < min_count) alive[i] = 0, changed = true;
    }

    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (alive[i]) members.push_back(i);

    std::vector<int> per_category(catalog.categories.size(), 0);
    std::vector<int> per_brand(catalog.brands.size(), 0);
    for (int i : members) {
      ++per_category[catalog.items[i].category];
      ++per_brand[catalog.items[i].brand];
    }
    std::vector<int> level_of(n, 0);
    std::vector<int> per_level;
    if (assign_levels && !members.empty()) {
      auto levels = assign_levels(subset_catalog(members));
      if (levels.size() != members.size()) throw Error("level assigner returned wrong count");
      for (std::size_t j = 0; j < members.size(); ++j) {
        level_of[members[j]] = levels[j];
        if (levels[j] >= static_cast<int>(per_level.size())) per_level.resize(levels[j] + 1, 0);
        ++per_level[levels[j]];
      }
    }
    for (int i : members) {
      const auto& item = catalog.items[i];
      bool drop = per_category[item.category] < min_count || per_brand[item.brand] < min_count;
      if (!per_level.empty() && per_level[level_of[i]] < min_count) drop = true;
      if (drop) alive[i] = 0, changed = true;
    }

    std::vector<Seq> kept;
    kept.reserve(seqs.size());
    for (auto& s : seqs) {
      Seq t{s.key, {}, {}};
      for (std::size_t j = 0; j < s.items.size(); ++j) {
        if (alive[s.items[j]]) {
          t.items.push_back(s.items[j]);
          t.times.push_back(s.times[j]);
        }
      }
      if (t.items.size() != s.items.size()) changed = true;
      if (t.items.size() >= 2) kept.push_back(std::move(t));
    }
    seqs = std::move(kept);
  }

  if (seqs.empty()) throw Error("corpus eliminated by core filter");

  // Dense re-indexing in the original catalog order.
  SessionSet out;
  out.tag = set.tag;
  std::vector<int> remap(n, -1);
  std::vector<int> category_remap(catalog.categories.size(), -1);
  std::vector<int> brand_remap(catalog.brands.size(), -1);
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    CatalogItem item = catalog.items[i];
    int& c = category_remap[item.category];
    if (c < 0) {
      c = static_cast<int>(out.catalog.categories.size());
      out.catalog.categories.push_back(catalog.categories[item.category]);
    }
    int& b = brand_remap[item.brand];
    if (b < 0) {
      b = static_cast<int>(out.catalog.brands.size());
      out.catalog.brands.push_back(catalog.brands[item.brand]);
    }
    item.category = c;
    item.brand = b;
    remap[i] = out.catalog.size();
    out.catalog.items.push_back(std::move(item));
  }
  out.catalog.levels = catalog.levels;
  if (assign_levels) {
    auto levels = assign_levels(out.catalog);
    int rho = 0;
    for (int i = 0; i < out.catalog.size(); ++i) {
      out.catalog.items[i].price_level = levels[i];
      rho = std::max(rho, levels[i]);
    }
    out.catalog.levels = std::max(out.catalog.levels, rho);
  }

  for (auto& s : seqs) {
    Session session;
    session.key = std::move(s.key);
    session.timestamps = std::move(s.times);
    for (int i : s.items) session.items.push_back(remap[i]);
    session.target = session.items.back();
    session.items.pop_back();
    out.sessions.push_back(std::move(session));
  }
  return out;
}

std::array<SessionSet, 3> chronological_split(const SessionSet& set, std::array<double, 3> ratios) {
  const std::size_t n = set.sessions.size();
  if (n < 3) throw Error("chronological split needs at least 3 sessions, got " + std::to_string(n));
  if (ratios[0] < 0 || ratios[1] < 0 || ratios[0] + ratios[1] > 1.0 + 1e-12) {
    throw Error("invalid split ratios");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set.sessions[a].last_time() < set.sessions[b].last_time();
  });

  // The epsilon keeps exact products such as 0.7 * 10 from flooring to 6.
  const auto n_train = static_cast<std::size_t>(std::floor(ratios[0] * n + 1e-9));
  const auto n_valid = static_cast<std::size_t>(std::floor(ratios[1] * n + 1e-9));

  std::array<SessionSet, 3> out;
  const std::array<SplitTag, 3> tags = {SplitTag::kTrain, SplitTag::kValid, SplitTag::kTest};
  for (int k = 0; k < 3; ++k) {
    out[k].catalog = set.catalog;
    out[k].tag = tags[k];
  }
  for (std::size_t j = 0; j < n; ++j) {
    int k = j < n_train ? 0 : (j < n_train + n_valid ? 1 : 2);
    out[k].sessions.push_back(set.sessions[order[j]]);
  }
  return out;
}

CorpusStats corpus_stats(const SplitDataset& data) {
  CorpusStats st;
  st.items = data.catalog.size();
  st.price_levels = data.catalog.levels;
  st.categories = static_cast<int>(data.catalog.categories.size());
  st.brands = static_cast<int>(data.catalog.brands.size());
  for (const auto& split : data.splits) {
    st.sessions += split.sessions.size();
    st.interactions += split.interactions();
  }
  st.avg_length = st.sessions ? static_cast<double>(st.interactions) / st.sessions : 0.0;
  return st;
}

}  // namespace hyperprice
