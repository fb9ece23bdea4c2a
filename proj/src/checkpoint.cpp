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

#include "hyperprice/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <vector>

namespace hyperprice {

namespace {

constexpr char kMagic[8] = {'H', 'P', 'R', 'C', 'K', 'P', 'T', '\0'};
constexpr char kEndMagic[8] = {'H', 'P', 'R', 'C', 'E', 'N', 'D', '\0'};

class Writer {
 public:
  template <typename V>
  void pod(const V& v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(V));
  }
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  void str32(const std::string& s) {
    pod(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  const std::vector<char>& buffer() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Parser {
 public:
  explicit Parser(std::vector<char> data) : data_(std::move(data)) {}

  template <typename V>
  V pod(const char* what) {
    V v;
    take(&v, sizeof(V), what);
    return v;
  }
  void take(void* out, std::size_t n, const char* what) {
    if (data_.size() - pos_ < n) throw Error(std::string("checkpoint truncated while reading ") + what);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
  }
  std::string str(std::size_t n, const char* what) {
    std::string s(n, '\0');
    take(s.data(), n, what);
    return s;
  }
  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::vector<char> data_;
  std::size_t pos_ = 0;
};

void write_block(Writer& w, const Matrix<float>& m) {
  w.bytes(m.data(), sizeof(float) * static_cast<std::size_t>(m.size()));
}

}  // namespace

std::string config_to_json(const ModelConfig& c, const std::map<std::string, std::string>& metadata) {
  const auto& v = c.variant;
  nlohmann::ordered_json j;
  j["dim"] = c.dim;
  j["heads"] = c.heads;
  j["layers"] = c.layers;
  j["levels"] = c.levels;
  j["n_items"] = c.n_items;
  j["n_categories"] = c.n_categories;
  j["n_brands"] = c.n_brands;
  j["max_len"] = c.max_len;
  j["neighbor_cap"] = c.neighbor_cap;
  j["graph_seed"] = c.graph_seed;
  j["variant"] = {{"use_price", v.use_price},
                  {"use_category", v.use_category},
                  {"use_brand", v.use_brand},
                  {"price_in_conv_only", v.price_in_conv_only},
                  {"uniform_levels", v.uniform_levels},
                  {"gcn_aggregation", v.gcn_aggregation},
                  {"no_cooccurrence", v.no_cooccurrence},
                  {"no_fusion", v.no_fusion},
                  {"single_loss", v.single_loss}};
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, val] : metadata) j["metadata"][k] = val;
  return j.dump();
}

ModelConfig config_from_json(const std::string& text, std::map<std::string, std::string>* metadata) {
  try {
    const auto j = nlohmann::json::parse(text);
    ModelConfig c;
    c.dim = j.at("dim").get<int>();
    c.heads = j.at("heads").get<int>();
    c.layers = j.at("layers").get<int>();
    c.levels = j.at("levels").get<int>();
    c.n_items = j.at("n_items").get<int>();
    c.n_categories = j.at("n_categories").get<int>();
    c.n_brands = j.at("n_brands").get<int>();
    c.max_len = j.at("max_len").get<int>();
    c.neighbor_cap = j.at("neighbor_cap").get<int>();
    c.graph_seed = j.at("graph_seed").get<std::uint64_t>();
    const auto& v = j.at("variant");
    c.variant.use_price = v.at("use_price").get<bool>();
    c.variant.use_category = v.at("use_category").get<bool>();
    c.variant.use_brand = v.at("use_brand").get<bool>();
    c.variant.price_in_conv_only = v.at("price_in_conv_only").get<bool>();
    c.variant.uniform_levels = v.at("uniform_levels").get<bool>();
    c.variant.gcn_aggregation = v.at("gcn_aggregation").get<bool>();
    c.variant.no_cooccurrence = v.at("no_cooccurrence").get<bool>();
    c.variant.no_fusion = v.at("no_fusion").get<bool>();
    c.variant.single_loss = v.at("single_loss").get<bool>();
    if (metadata && j.contains("metadata")) {
      for (const auto& [k, val] : j.at("metadata").items()) (*metadata)[k] = val.get<std::string>();
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid model configuration: ") + e.what());
  }
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.pod(kCheckpointVersion);
  const std::string json = config_to_json(ck.config, ck.metadata);
  w.pod(static_cast<std::uint64_t>(json.size()));
  w.bytes(json.data(), json.size());
  w.pod(static_cast<std::int64_t>(ck.params.step));
  w.pod(static_cast<std::uint32_t>(ck.params.params().size()));
  for (const auto& p : ck.params.params()) {
    w.str32(p.name);
    w.pod(static_cast<std::uint32_t>(p.value.rows()));
    w.pod(static_cast<std::uint32_t>(p.value.cols()));
    write_block(w, p.value);
    write_block(w, p.first_moment);
    write_block(w, p.second_moment);
  }
  w.bytes(kEndMagic, sizeof(kEndMagic));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint " + path);
  out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
  if (!out) throw Error("write failed for checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("checkpoint not found: " + path);
  Parser r(std::vector<char>(std::istreambuf_iterator<char>(in), {}));
  char magic[8];
  r.take(magic, sizeof(magic), "header");
  if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) throw Error("not a checkpoint file: " + path);
  const auto version = r.pod<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw Error("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                std::to_string(kCheckpointVersion) + ")");
  }
  Checkpoint ck;
  const auto json_len = r.pod<std::uint64_t>("config length");
  ck.config = config_from_json(r.str(json_len, "config"), &ck.metadata);
  const auto step = r.pod<std::int64_t>("optimizer step");
  const auto count = r.pod<std::uint32_t>("array count");
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name = r.str(r.pod<std::uint32_t>("array name length"), "array name");
    const auto rows = r.pod<std::uint32_t>("array rows");
    const auto cols = r.pod<std::uint32_t>("array cols");
    const std::size_t bytes = sizeof(float) * static_cast<std::size_t>(rows) * cols;
    const std::string what = "array '" + name + "'";
    if (3 * bytes > r.remaining()) throw Error("checkpoint truncated while reading " + what);
    auto& p = ck.params.add(name, rows, cols);
    r.take(p.value.data(), bytes, what.c_str());
    r.take(p.first_moment.data(), bytes, what.c_str());
    r.take(p.second_moment.data(), bytes, what.c_str());
  }
  char end[8];
  r.take(end, sizeof(end), "trailer");
  if (std::memcmp(end, kEndMagic, sizeof(end)) != 0 || !r.done()) throw Error("corrupt checkpoint trailer");
  ck.params.step = step;
  return ck;
}

void check_compatible(const ParameterStore<float>& params, const Model<float>& model) {
  const auto specs = model.param_specs();
  for (const auto& spec : specs) {
    if (!params.contains(spec.name)) throw Error("checkpoint lacks array '" + spec.name + "'");
    const auto& v = params.at(spec.name).value;
    if (v.rows() != spec.rows || v.cols() != spec.cols) {
      throw Error("array '" + spec.name + "' has shape " + std::to_string(v.rows()) + "x" +
                  std::to_string(v.cols()) + ", expected " + std::to_string(spec.rows) + "x" +
                  std::to_string(spec.cols));
    }
  }
  if (params.params().size() != specs.size()) {
    for (const auto& p : params.params()) {
      bool known = false;
      for (const auto& spec : specs) known = known || spec.name == p.name;
      if (!known) throw Error("checkpoint has unexpected array '" + p.name + "'");
    }
  }
}

}  // namespace hyperprice
