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

#include <sstream>

#include "hyperprice/pipeline.hpp"
#include "hyperprice/serialize.hpp"
#include "hyperprice/synthetic.hpp"
#include "test_util.hpp"

namespace hyperprice {
namespace {

SplitDataset sample_data() {
  SyntheticConfig sc;
  sc.n_items = 50;
  sc.n_categories = 3;
  sc.n_brands = 2;
  sc.n_sessions = 300;
  sc.seed = 21;
  PreprocessConfig pc;
  pc.min_count = 3;
  return preprocess(generate_synthetic(sc).events, pc).data;
}

std::string dump(const SplitDataset& d) {
  std::ostringstream out;
  write_dataset(out, d);
  return out.str();
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(-1.5e-7), "-1.5e-07");
  for (double v : {1.0 / 3.0, 12.99, 1e300, 2.2250738585072014e-308}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Dataset, RoundTripIsExact) {
  const auto d = sample_data();
  const auto text = dump(d);
  std::istringstream in(text);
  const auto back = read_dataset(in);
  EXPECT_EQ(dump(back), text);
  EXPECT_EQ(back.catalog.levels, d.catalog.levels);
  ASSERT_EQ(back.catalog.size(), d.catalog.size());
  for (int i = 0; i < d.catalog.size(); ++i) {
    EXPECT_EQ(back.catalog.items[i].price, d.catalog.items[i].price);
    EXPECT_EQ(back.catalog.items[i].price_level, d.catalog.items[i].price_level);
  }
  for (int s = 0; s < 3; ++s) {
    ASSERT_EQ(back.splits[s].sessions.size(), d.splits[s].sessions.size());
    for (std::size_t i = 0; i < d.splits[s].sessions.size(); ++i) {
      EXPECT_EQ(back.splits[s].sessions[i].items, d.splits[s].sessions[i].items);
      EXPECT_EQ(back.splits[s].sessions[i].target, d.splits[s].sessions[i].target);
      EXPECT_EQ(back.splits[s].sessions[i].timestamps, d.splits[s].sessions[i].timestamps);
    }
  }
}

void expect_error(const std::string& text, const std::string& fragment) {
  std::istringstream in(text);
  try {
    read_dataset(in);
    FAIL() << "expected an error containing '" << fragment << "'";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(Dataset, RejectsOtherFormatsAndVersions) {
  expect_error("something-else\t1\n", "line 1");
  expect_error("hyperprice-dataset\t2\n", "line 1");
  expect_error("", "truncated");
}

TEST(Dataset, ErrorsNameTheLine) {
  auto text = dump(sample_data());
  // Corrupt the first item price (line 1 header, 2 levels, categories, names..., brands, names..., items).
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  std::size_t item_line = 0;
  while (lines[item_line].rfind("items\t", 0) != 0) ++item_line;
  auto bad = lines;
  bad[item_line + 1] = "i0\tnot-a-number\t0\t0\t1";
  std::string joined;
  for (const auto& l : bad) joined += l + "\n";
  expect_error(joined, "line " + std::to_string(item_line + 2));
  // Truncation inside the splits.
  std::string cut;
  for (std::size_t i = 0; i + 3 < lines.size(); ++i) cut += lines[i] + "\n";
  expect_error(cut, "truncated");
}

TEST(Dataset, MissingFile) {
  EXPECT_THROW(load_dataset("/nonexistent/hyperprice.tsv"), Error);
}

TEST(LevelTable, OneRowPerCategory) {
  SyntheticConfig sc;
  sc.n_items = 60;
  sc.n_categories = 3;
  sc.n_brands = 2;
  sc.n_sessions = 300;
  PreprocessConfig pc;
  pc.min_count = 0;
  const auto r = preprocess(generate_synthetic(sc).events, pc);
  std::ostringstream out;
  write_level_table(out, r.data.catalog, r.scheme);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "category,items,mu,delta,min,max,flagged,degenerate,cut_1,cut_2,cut_3,cut_4");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11) << line;
  }
  EXPECT_EQ(rows, static_cast<int>(r.data.catalog.categories.size()));
  std::ostringstream items;
  write_item_levels(items, r.data.catalog);
  const auto text = items.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), r.data.catalog.size() + 1);
}

}  // namespace
}  // namespace hyperprice
