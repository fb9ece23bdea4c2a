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

#include "hyperprice/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace hyperprice {

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, end);
}

namespace {

constexpr const char* kSplitNames[] = {"train", "valid", "test"};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::vector<std::string> next() {
    std::string line;
    if (!std::getline(in_, line)) throw Error("dataset file truncated after line " + std::to_string(line_));
    ++line_;
    return split_tabs(line);
  }

  /// Reads `<tag> <count>` or `<tag> <name> <count>` headers.
  long header(const std::string& tag, std::size_t fields = 2) {
    auto f = next();
    if (f.size() != fields || f[0] != tag) fail("expected '" + tag + "'");
    return to_long(f.back());
  }

  long to_long(const std::string& s) {
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad integer '" + s + "'");
    return v;
  }

  double to_double(const std::string& s) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad number '" + s + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("dataset file line " + std::to_string(line_) + ": " + what);
  }

 private:
  std::istream& in_;
  int line_ = 0;
};

}  // namespace

void write_dataset(std::ostream& out, const SplitDataset& data) {
  const auto& c = data.catalog;
  out << "hyperprice-dataset\t" << kDatasetFormatVersion << '\n';
  out << "levels\t" << c.levels << '\n';
  out << "categories\t" << c.categories.size() << '\n';
  for (const auto& name : c.categories) out << name << '\n';
  out << "brands\t" << c.brands.size() << '\n';
  for (const auto& name : c.brands) out << name << '\n';
  out << "items\t" << c.items.size() << '\n';
  for (const auto& it : c.items) {
    out << it.raw_id << '\t' << format_double(it.price) << '\t' << it.category << '\t' << it.brand << '\t'
        << it.price_level << '\n';
  }
  for (int s = 0; s < 3; ++s) {
    const auto& sessions = data.splits[s].sessions;
    out << "split\t" << kSplitNames[s] << '\t' << sessions.size() << '\n';
    for (const auto& sess : sessions) {
      const auto seq = sess.sequence();
      out << sess.key << '\t' << seq.size();
      for (int item : seq) out << '\t' << item;
      for (auto t : sess.timestamps) out << '\t' << t;
      out << '\n';
    }
  }
}

SplitDataset read_dataset(std::istream& in) {
  Reader r(in);
  auto head = r.next();
  if (head.size() != 2 || head[0] != "hyperprice-dataset") r.fail("not a hyperprice dataset file");
  if (r.to_long(head[1]) != kDatasetFormatVersion) {
    r.fail("unsupported dataset format version " + head[1]);
  }
  SplitDataset data;
  auto& c = data.catalog;
  c.levels = static_cast<int>(r.header("levels"));
  const long n_cat = r.header("categories");
  for (long i = 0; i < n_cat; ++i) c.categories.push_back(r.next().at(0));
  const long n_brand = r.header("brands");
  for (long i = 0; i < n_brand; ++i) c.brands.push_back(r.next().at(0));
  const long n_items = r.header("items");
  for (long i = 0; i < n_items; ++i) {
    auto f = r.next();
    if (f.size() != 5) r.fail("item record needs 5 fields");
    CatalogItem it{f[0], r.to_double(f[1]), static_cast<int>(r.to_long(f[2])),
                   static_cast<int>(r.to_long(f[3])), static_cast<int>(r.to_long(f[4]))};
    if (it.category < 0 || it.category >= n_cat || it.brand < 0 || it.brand >= n_brand) {
      r.fail("item feature index out of range");
    }
    if (it.price_level < 0 || it.price_level > c.levels) r.fail("item level out of range");
    c.items.push_back(std::move(it));
  }
  const SplitTag tags[] = {SplitTag::kTrain, SplitTag::kValid, SplitTag::kTest};
  for (int s = 0; s < 3; ++s) {
    auto f = r.next();
    if (f.size() != 3 || f[0] != "split" || f[1] != kSplitNames[s]) {
      r.fail(std::string("expected split '") + kSplitNames[s] + "'");
    }
    const long count = r.to_long(f[2]);
    auto& set = data.splits[s];
    set.tag = tags[s];
    for (long i = 0; i < count; ++i) {
      auto rec = r.next();
      if (rec.size() < 2) r.fail("session record too short");
      const long len = r.to_long(rec[1]);
      if (len < 2 || rec.size() != static_cast<std::size_t>(2 + 2 * len)) r.fail("session record length mismatch");
      Session sess;
      sess.key = rec[0];
      for (long j = 0; j < len; ++j) {
        const long item = r.to_long(rec[2 + j]);
        if (item < 0 || item >= n_items) r.fail("session item out of range");
        sess.items.push_back(static_cast<int>(item));
        sess.timestamps.push_back(r.to_long(rec[2 + len + j]));
      }
      sess.target = sess.items.back();
      sess.items.pop_back();
      set.sessions.push_back(std::move(sess));
    }
    set.catalog = c;
  }
  return data;
}

void save_dataset(const std::string& path, const SplitDataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_dataset(out, data);
  if (!out) throw Error("write failed for " + path);
}

SplitDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("dataset not found: " + path);
  return read_dataset(in);
}

void write_level_table(std::ostream& out, const ItemCatalog& catalog, const LevelScheme& scheme) {
  out << "category,items,mu,delta,min,max,flagged,degenerate";
  for (int k = 1; k < scheme.rho; ++k) out << ",cut_" << k;
  out << '\n';
  for (std::size_t c = 0; c < scheme.categories.size(); ++c) {
    const auto& cl = scheme.categories[c];
    out << catalog.categories.at(c) << ',' << cl.n_items << ',' << format_double(cl.fit.mu) << ','
        << format_double(cl.fit.delta) << ',' << format_double(cl.min) << ',' << format_double(cl.max) << ','
        << (cl.fit.flagged ? 1 : 0) << ',' << (cl.degenerate ? 1 : 0);
    std::vector<double> cuts;
    if (cl.n_items > 0) cuts = scheme.cut_prices(static_cast<int>(c));
    for (int k = 0; k + 1 < scheme.rho; ++k) {
      out << ',';
      if (k < static_cast<int>(cuts.size())) out << format_double(cuts[k]);
    }
    out << '\n';
  }
}

void write_item_levels(std::ostream& out, const ItemCatalog& catalog) {
  out << "item,category,brand,price,level\n";
  for (const auto& it : catalog.items) {
    out << it.raw_id << ',' << catalog.categories.at(it.category) << ',' << catalog.brands.at(it.brand) << ','
        << format_double(it.price) << ',' << it.price_level << '\n';
  }
}

void write_stats(std::ostream& out, const CorpusStats& s) {
  std::ostringstream avg;
  avg.precision(4);
  avg << std::fixed << s.avg_length;
  out << "key,value\n"
      << "#item," << s.items << '\n'
      << "#price level," << s.price_levels << '\n'
      << "#category," << s.categories << '\n'
      << "#brand," << s.brands << '\n'
      << "#interaction," << s.interactions << '\n'
      << "#session," << s.sessions << '\n'
      << "avg.length," << avg.str() << '\n';
}

}  // namespace hyperprice
