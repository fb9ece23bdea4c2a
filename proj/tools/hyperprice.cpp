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

// Command-line entry point: synth -> preprocess -> levels -> graph -> train -> evaluate -> ablate.

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include "hyperprice/checkpoint.hpp"
#include "hyperprice/evaluation.hpp"
#include "hyperprice/gradcheck.hpp"
#include "hyperprice/pipeline.hpp"
#include "hyperprice/serialize.hpp"
#include "hyperprice/synthetic.hpp"
#include "hyperprice/training.hpp"

namespace fs = std::filesystem;
using namespace hyperprice;

namespace {

/// Exit code for a gradient check above tolerance.
constexpr int kGradcheckBreach = 2;

struct RunConfig {
  std::string workdir = ".";
  std::string events;
  std::string checkpoint;  // defaults to <workdir>/model.ckpt
  char delimiter = ',';
  SessionKeying keying = SessionKeying::kSessionColumn;
  PreprocessConfig preprocess;
  TrainConfig train;
  SyntheticConfig synth;
  std::vector<int> ks{10, 20};
  int repeats = 1;
  double gradcheck_tolerance = 1e-4;

  std::string path(const std::string& name) const { return (fs::path(workdir) / name).string(); }
  std::string checkpoint_path() const { return checkpoint.empty() ? path("model.ckpt") : checkpoint; }
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size()) throw Error("not an integer list: '" + text + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string part;
  while (std::getline(in, part, delim)) out.push_back(part);
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

/// Reads an INI file; unknown sections or keys are errors.
void load_config(const std::string& file, RunConfig& c) {
  if (!fs::exists(file)) throw Error("config not found: " + file);
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(file, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error("config " + file + ": " + e.message() + " at line " + std::to_string(e.line()));
  }
  using Setter = std::function<void(const std::string&)>;
  auto as_int = [](const std::string& v) { return parse_int_list(v).at(0); };
  auto as_double = [](const std::string& v) { return std::stod(v); };
  auto as_bool = [](const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error("not a boolean: '" + v + "'");
  };
  const std::map<std::string, Setter> setters{
      {"paths.workdir", [&](const std::string& v) { c.workdir = v; }},
      {"paths.events", [&](const std::string& v) { c.events = v; }},
      {"paths.checkpoint", [&](const std::string& v) { c.checkpoint = v; }},
      {"data.delimiter",
       [&](const std::string& v) {
         if (v == "tab" || v == "\\t") {
           c.delimiter = '\t';
         } else if (v.size() == 1) {
           c.delimiter = v[0];
         } else {
           throw Error("delimiter must be one character or 'tab'");
         }
       }},
      {"data.keying",
       [&](const std::string& v) {
         if (v == "session") {
           c.keying = SessionKeying::kSessionColumn;
         } else if (v == "user-day") {
           c.keying = SessionKeying::kUserDay;
         } else {
           throw Error("keying must be 'session' or 'user-day'");
         }
       }},
      {"data.rho", [&](const std::string& v) { c.preprocess.rho = as_int(v); }},
      {"data.levels",
       [&](const std::string& v) {
         if (v == "logistic") {
           c.preprocess.method = LevelMethod::kLogistic;
         } else if (v == "uniform") {
           c.preprocess.method = LevelMethod::kUniform;
         } else {
           throw Error("levels must be 'logistic' or 'uniform'");
         }
       }},
      {"data.min_count", [&](const std::string& v) { c.preprocess.min_count = as_int(v); }},
      {"data.max_len", [&](const std::string& v) { c.preprocess.max_len = c.train.model.max_len = as_int(v); }},
      {"model.dim", [&](const std::string& v) { c.train.model.dim = as_int(v); }},
      {"model.heads", [&](const std::string& v) { c.train.model.heads = as_int(v); }},
      {"model.layers", [&](const std::string& v) { c.train.model.layers = as_int(v); }},
      {"model.neighbor_cap", [&](const std::string& v) { c.train.model.neighbor_cap = as_int(v); }},
      {"model.variant", [&](const std::string& v) { c.train.model.variant = parse_variant(v); }},
      {"train.batch_size", [&](const std::string& v) { c.train.batch_size = as_int(v); }},
      {"train.learning_rate", [&](const std::string& v) { c.train.learning_rate = as_double(v); }},
      {"train.epochs", [&](const std::string& v) { c.train.epochs = as_int(v); }},
      {"train.seed", [&](const std::string& v) { c.train.seed = std::stoull(v); }},
      {"train.select_k", [&](const std::string& v) { c.train.select_k = as_int(v); }},
      {"train.workers", [&](const std::string& v) { c.train.workers = as_int(v); }},
      {"train.deterministic", [&](const std::string& v) { c.train.deterministic = as_bool(v); }},
      {"train.repeats", [&](const std::string& v) { c.repeats = as_int(v); }},
      {"eval.ks", [&](const std::string& v) { c.ks = parse_int_list(v); }},
      {"synth.items", [&](const std::string& v) { c.synth.n_items = as_int(v); }},
      {"synth.categories", [&](const std::string& v) { c.synth.n_categories = as_int(v); }},
      {"synth.brands", [&](const std::string& v) { c.synth.n_brands = as_int(v); }},
      {"synth.sessions", [&](const std::string& v) { c.synth.n_sessions = as_int(v); }},
      {"synth.rho", [&](const std::string& v) { c.synth.rho = as_int(v); }},
      {"synth.seed", [&](const std::string& v) { c.synth.seed = std::stoull(v); }},
      {"synth.min_length", [&](const std::string& v) { c.synth.min_length = as_int(v); }},
      {"synth.max_length", [&](const std::string& v) { c.synth.max_length = as_int(v); }},
      {"synth.noise", [&](const std::string& v) { c.synth.noise = as_double(v); }},
      {"synth.cluster_size", [&](const std::string& v) { c.synth.cluster_size = as_int(v); }},
      {"gradcheck.tolerance", [&](const std::string& v) { c.gradcheck_tolerance = as_double(v); }},
  };
  for (const auto& [section, entries] : tree) {
    if (entries.empty()) throw Error("config " + file + ": key '" + section + "' outside a section");
    for (const auto& [key, value] : entries) {
      const auto full = section + "." + key;
      const auto it = setters.find(full);
      if (it == setters.end()) throw Error("config " + file + ": unknown key '" + full + "'");
      try {
        it->second(value.data());
      } catch (const std::exception& e) {
        throw Error("config " + file + ": " + full + ": " + e.what());
      }
    }
  }
}

std::ofstream open_output(const std::string& path) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

void log_written(const std::string& path) { std::cerr << "wrote " << path << '\n'; }

SplitDataset load_workdir_dataset(const RunConfig& c) { return load_dataset(c.path("dataset.tsv")); }

int max_k(const RunConfig& c) {
  if (c.ks.empty()) throw Error("at least one k is required");
  for (int k : c.ks) {
    if (k < 1) throw Error("k must be positive");
  }
  return *std::max_element(c.ks.begin(), c.ks.end());
}

// ---------------------------------------------------------------------------------------

int cmd_synth(const RunConfig& c, const std::string& out_path) {
  const auto corpus = generate_synthetic(c.synth);
  const auto events = out_path.empty() ? c.path("events.csv") : out_path;
  {
    auto out = open_output(events);
    write_events(out, corpus.events);
  }
  log_written(events);
  const auto truth = c.path("synthetic_truth.json");
  {
    auto out = open_output(truth);
    corpus.truth.write_json(out);
  }
  log_written(truth);
  return 0;
}

void write_level_outputs(const RunConfig& c, const ItemCatalog& catalog, const LevelScheme& scheme) {
  {
    auto out = open_output(c.path("level_table.csv"));
    write_level_table(out, catalog, scheme);
  }
  log_written(c.path("level_table.csv"));
  {
    auto out = open_output(c.path("item_levels.csv"));
    write_item_levels(out, catalog);
  }
  log_written(c.path("item_levels.csv"));
}

int cmd_preprocess(const RunConfig& c) {
  if (c.events.empty()) throw Error("no event file given (--events or [paths] events)");
  std::ifstream in(c.events, std::ios::binary);
  if (!in) throw Error("events not found: " + c.events);
  const auto events = parse_events(in, {c.delimiter, c.keying});
  const auto result = preprocess(events, c.preprocess);
  save_dataset(c.path("dataset.tsv"), result.data);
  log_written(c.path("dataset.tsv"));
  write_level_outputs(c, result.data.catalog, result.scheme);
  {
    auto out = open_output(c.path("stats.csv"));
    write_stats(out, corpus_stats(result.data));
  }
  log_written(c.path("stats.csv"));
  return 0;
}

int cmd_levels(const RunConfig& c) {
  const auto data = load_workdir_dataset(c);
  const auto scheme = fit_level_scheme(data.catalog, data.catalog.levels, c.preprocess.method);
  write_level_outputs(c, data.catalog, scheme);
  return 0;
}

int cmd_graph(const RunConfig& c) {
  const auto data = load_workdir_dataset(c);
  const auto catalog = variant_catalog(data.catalog, c.train.model.variant);
  const auto graph = HeteroHypergraph::build(data.train(), catalog);
  auto out = open_output(c.path("graph_stats.csv"));
  graph.write_stats(out);
  log_written(c.path("graph_stats.csv"));
  return 0;
}

int cmd_train(const RunConfig& c) {
  const auto data = load_workdir_dataset(c);
  TrainConfig tc = c.train;
  tc.log = &std::cerr;
  const auto result = train(tc, data);
  save_checkpoint(c.checkpoint_path(), result.best);
  log_written(c.checkpoint_path());
  auto out = open_output(c.path("history.csv"));
  write_history(out, result.history, tc.select_k);
  log_written(c.path("history.csv"));
  return 0;
}

/// Loads the checkpoint and rebuilds the graph and model it was trained with.
struct LoadedModel {
  Checkpoint checkpoint;
  ModelContext context;
};

LoadedModel load_model(const RunConfig& c, const SplitDataset& data) {
  LoadedModel m;
  m.checkpoint = load_checkpoint(c.checkpoint_path());
  const auto& cfg = m.checkpoint.config;
  const auto& cat = data.catalog;
  if (cfg.n_items != cat.size() || cfg.levels != cat.levels ||
      cfg.n_categories != static_cast<int>(cat.categories.size()) ||
      cfg.n_brands != static_cast<int>(cat.brands.size())) {
    throw Error("checkpoint " + c.checkpoint_path() + " was trained on a different dataset");
  }
  m.context = build_context(cfg, data);
  check_compatible(m.checkpoint.params, *m.context.model);
  return m;
}

int cmd_evaluate(const RunConfig& c) {
  const auto data = load_workdir_dataset(c);
  const int k = max_k(c);
  const auto loaded = load_model(c, data);
  const auto& test = data.test();
  if (test.sessions.empty()) throw Error("test split is empty");
  const auto variant = variant_name(loaded.checkpoint.config.variant);
  const auto model_results = rank_with_model(*loaded.context.model, loaded.checkpoint.params, loaded.context.index,
                                             test, k, c.train.batch_size);

  const int n = data.catalog.size();
  const auto pop = item_popularity(data.train(), n);
  const SknnRanker sknn(data.train(), n);
  std::vector<RankedResult> spop_results, sknn_results, random_results;
  for (std::size_t i = 0; i < test.sessions.size(); ++i) {
    const auto& s = test.sessions[i];
    const RankedResult base{{}, s.target, model_results[i].target_level, static_cast<int>(s.items.size())};
    spop_results.push_back(base);
    spop_results.back().ranking = s_pop(s.items, pop, k);
    sknn_results.push_back(base);
    sknn_results.back().ranking = sknn.rank(s.items, k);
    random_results.push_back(base);
    random_results.back().ranking = random_ranking(n, k, c.train.seed, i);
  }

  std::vector<MetricRow> rows;
  auto append = [&](const std::vector<MetricRow>& more) { rows.insert(rows.end(), more.begin(), more.end()); };
  append(metric_rows("hyperprice", variant, model_results, c.ks));
  append(metric_rows("S-POP", "-", spop_results, c.ks));
  append(metric_rows("SKNN", "-", sknn_results, c.ks));
  append(metric_rows("random", "-", random_results, c.ks));
  {
    auto out = open_output(c.path("results.csv"));
    write_metric_rows(out, rows);
  }
  log_written(c.path("results.csv"));

  for (const std::string group : {"level", "length"}) {
    std::vector<BreakdownRow> b;
    for (const auto& [name, results] :
         {std::pair<std::string, const std::vector<RankedResult>*>{"hyperprice", &model_results},
          {"S-POP", &spop_results},
          {"SKNN", &sknn_results}}) {
      const auto part = breakdown(name, group, *results, c.ks);
      b.insert(b.end(), part.begin(), part.end());
    }
    const auto path = c.path("breakdown_" + group + ".csv");
    auto out = open_output(path);
    write_breakdown_rows(out, b);
    log_written(path);
  }
  for (const auto& r : rows) {
    std::cerr << r.model << " Prec@" << r.k << ' ' << r.prec << " MRR@" << r.k << ' ' << r.mrr << '\n';
  }
  return 0;
}

int cmd_recommend(const RunConfig& c, const std::string& items, const std::string& out_path) {
  const auto data = load_workdir_dataset(c);
  const int k = max_k(c);
  const auto loaded = load_model(c, data);
  SessionSet query;
  query.catalog = data.catalog;
  Session s;
  s.key = "query";
  std::stringstream in(items);
  std::string raw;
  while (std::getline(in, raw, ',')) {
    if (raw.empty()) continue;
    const int idx = data.catalog.find(raw);
    if (idx < 0) throw Error("unknown item '" + raw + "'");
    s.items.push_back(idx);
  }
  if (s.items.empty()) throw Error("recommend needs at least one item");
  const int max_len = loaded.checkpoint.config.max_len;
  if (static_cast<int>(s.items.size()) > max_len) {
    s.items.erase(s.items.begin(), s.items.end() - max_len);
  }
  query.sessions.push_back(s);
  const auto ranked =
      rank_with_model(*loaded.context.model, loaded.checkpoint.params, loaded.context.index, query, k, 1);
  const auto path = out_path.empty() ? c.path("recommendations.csv") : out_path;
  auto out = open_output(path);
  out << "rank,item,price,level\n";
  for (std::size_t r = 0; r < ranked[0].ranking.size(); ++r) {
    const auto& it = data.catalog.items[ranked[0].ranking[r]];
    out << r + 1 << ',' << it.raw_id << ',' << format_double(it.price) << ',' << it.price_level << '\n';
  }
  log_written(path);
  return 0;
}

int cmd_ablate(const RunConfig& c, std::vector<std::string> variants) {
  const auto data = load_workdir_dataset(c);
  max_k(c);
  if (variants.empty()) variants = variant_names();
  TrainConfig tc = c.train;
  tc.log = &std::cerr;
  const auto rows = run_ablation(tc, variants, data, c.ks, c.repeats);
  auto out = open_output(c.path("ablation.csv"));
  write_ablation_table(out, rows);
  log_written(c.path("ablation.csv"));
  return 0;
}

int cmd_gradcheck(const RunConfig& c, std::vector<std::string> variants) {
  if (variants.empty()) variants = variant_names();
  bool ok = true;
  auto out = open_output(c.path("gradcheck.csv"));
  out << "variant,tensor,checked,max_rel_error,max_abs_error\n";
  for (const auto& v : variants) {
    TinyCheckConfig tc;
    tc.variant = v;
    tc.seed = c.train.seed;
    const auto report = tiny_model_gradcheck(tc);
    for (const auto& e : report.entries) {
      out << v << ',' << e.name << ',' << e.checked << ',' << format_double(e.max_rel_error) << ','
          << format_double(e.max_abs_error) << '\n';
    }
    const bool passed = report.passed(c.gradcheck_tolerance);
    ok &= passed;
    std::cerr << "gradcheck " << v << ": max rel error " << report.max_rel_error << (passed ? " ok" : " BREACH")
              << '\n';
  }
  log_written(c.path("gradcheck.csv"));
  return ok ? 0 : kGradcheckBreach;
}

/// Header plus rows of a comma-separated file.
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("missing input for plot-data: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split(line, ','));
  }
  if (rows.empty()) throw Error("empty file: " + path);
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name, const std::string& path) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(path + ": missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

int cmd_plot_data(const RunConfig& c) {
  const auto plots = fs::path(c.workdir) / "plots";
  int written = 0;

  const auto ablation_path = c.path("ablation.csv");
  if (fs::exists(ablation_path)) {
    const auto rows = read_csv(ablation_path);
    const auto& h = rows[0];
    const auto v = column(h, "variant", ablation_path), k = column(h, "k", ablation_path),
               p = column(h, "Prec", ablation_path), m = column(h, "MRR", ablation_path);
    // Quantization (logistic vs uniform levels) and aggregation (triple-level vs mean).
    const std::vector<std::tuple<std::string, std::string, std::map<std::string, std::string>>> figures{
        {"quantization.csv", "levels", {{"full", "logistic"}, {"uni", "uniform"}}},
        {"aggregation.csv", "aggregation", {{"full", "triple-level"}, {"gcn", "mean"}}},
    };
    for (const auto& [file, label, mapping] : figures) {
      const auto path = (plots / file).string();
      auto out = open_output(path);
      out << label << ",k,Prec,MRR\n";
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto it = mapping.find(rows[r].at(v));
        if (it == mapping.end()) continue;
        out << it->second << ',' << rows[r].at(k) << ',' << rows[r].at(p) << ',' << rows[r].at(m) << '\n';
      }
      log_written(path);
      ++written;
    }
  }
  for (const std::string group : {"level", "length"}) {
    const auto in_path = c.path("breakdown_" + group + ".csv");
    if (!fs::exists(in_path)) continue;
    const auto rows = read_csv(in_path);
    const auto& h = rows[0];
    const auto mo = column(h, "model", in_path), va = column(h, "value", in_path), k = column(h, "k", in_path),
               p = column(h, "Prec", in_path), m = column(h, "MRR", in_path), n = column(h, "sessions", in_path);
    const auto path = (plots / (group == "level" ? "price_level.csv" : "session_length.csv")).string();
    auto out = open_output(path);
    out << "model," << (group == "level" ? "price_level" : "session_length") << ",k,Prec,MRR,sessions\n";
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      out << row.at(mo) << ',' << row.at(va) << ',' << row.at(k) << ',' << row.at(p) << ',' << row.at(m) << ','
          << row.at(n) << '\n';
    }
    log_written(path);
    ++written;
  }
  if (written == 0) throw Error("plot-data found neither ablation.csv nor breakdown files in " + c.workdir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Session-based recommendation with price and interest preferences"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string config_file, variant, ks, events_override, workdir_override, checkpoint_override;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool deterministic = false;
  app.add_option("--config", config_file, "INI configuration file");
  app.add_option("--seed", seed, "Seed (training seed; corpus seed for synth)");
  app.add_option("--variant", variant, "Model variant (full, -p, -pp, uni, wo-c, ..., gcn, -co, -BiP, CE)");
  app.add_option("--k", ks, "Comma-separated cutoffs, e.g. 10,20");
  app.add_option("--workers", workers, "OpenMP threads");
  app.add_flag("--deterministic", deterministic, "Require run-to-run identical results");
  app.add_option("--workdir", workdir_override, "Directory for artifacts");
  app.add_option("--checkpoint", checkpoint_override, "Checkpoint path");

  auto* synth = app.add_subcommand("synth", "Generate the synthetic price-sensitive corpus");
  std::string synth_out;
  synth->add_option("--out", synth_out, "Event file (default <workdir>/events.csv)");
  auto* pre = app.add_subcommand("preprocess", "Sessions, core filter, price levels and split");
  pre->add_option("--events", events_override, "Raw event file");
  auto* levels = app.add_subcommand("levels", "Per-category level table of the preprocessed dataset");
  auto* graph = app.add_subcommand("graph", "Hypergraph statistics over the training split");
  auto* train_cmd = app.add_subcommand("train", "Train and keep the best validation checkpoint");
  auto* evaluate = app.add_subcommand("evaluate", "Test metrics for the checkpoint and the baselines");
  auto* recommend = app.add_subcommand("recommend", "Top-k items for a session prefix");
  std::string items, rec_out;
  recommend->add_option("--items", items, "Comma-separated raw item ids, oldest first")->required();
  recommend->add_option("--out", rec_out, "Output file (default <workdir>/recommendations.csv)");
  auto* ablate = app.add_subcommand("ablate", "Train and evaluate a list of variants");
  std::vector<std::string> variants;
  std::optional<int> repeats;
  ablate->add_option("--variants", variants, "Variants (default: all)")->delimiter(',');
  ablate->add_option("--repeats", repeats, "Seeds per variant; metrics are averaged");
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of every variant's loss");
  std::vector<std::string> check_variants;
  gradcheck->add_option("--variants", check_variants, "Variants (default: all)")->delimiter(',');
  auto* plot = app.add_subcommand("plot-data", "Per-figure CSVs from ablation and breakdown outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig c;
    if (!config_file.empty()) load_config(config_file, c);
    if (!workdir_override.empty()) c.workdir = workdir_override;
    if (!checkpoint_override.empty()) c.checkpoint = checkpoint_override;
    if (!events_override.empty()) c.events = events_override;
    if (!variant.empty()) c.train.model.variant = parse_variant(variant);
    if (!ks.empty()) c.ks = parse_int_list(ks);
    if (workers) c.train.workers = *workers;
    if (deterministic) c.train.deterministic = true;
    if (repeats) c.repeats = *repeats;
    if (seed) {
      c.train.seed = *seed;
      c.synth.seed = *seed;
    }
    if (c.train.workers > 0) omp_set_num_threads(c.train.workers);

    if (synth->parsed()) return cmd_synth(c, synth_out);
    if (pre->parsed()) return cmd_preprocess(c);
    if (levels->parsed()) return cmd_levels(c);
    if (graph->parsed()) return cmd_graph(c);
    if (train_cmd->parsed()) return cmd_train(c);
    if (evaluate->parsed()) return cmd_evaluate(c);
    if (recommend->parsed()) return cmd_recommend(c, items, rec_out);
    if (ablate->parsed()) return cmd_ablate(c, variants);
    if (gradcheck->parsed()) return cmd_gradcheck(c, check_variants);
    if (plot->parsed()) return cmd_plot_data(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
