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

#include <algorithm>
#include <map>
#include <set>

#include "hyperprice/gradcheck.hpp"
#include "hyperprice/model.hpp"
#include "test_util.hpp"

namespace hyperprice {
namespace {

class TinyGradcheck : public ::testing::TestWithParam<std::string> {};

TEST_P(TinyGradcheck, AnalyticMatchesFiniteDifferences) {
  for (std::uint64_t seed : {1, 2, 3}) {
    TinyCheckConfig c;
    c.variant = GetParam();
    c.seed = seed;
    const auto report = tiny_model_gradcheck(c);
    EXPECT_TRUE(report.passed(1e-4)) << "seed " << seed << " max rel " << report.max_rel_error;
    for (const auto& e : report.entries) EXPECT_GT(e.checked, 0u) << e.name;
  }
}

INSTANTIATE_TEST_SUITE_P(AllVariants, TinyGradcheck, ::testing::ValuesIn(variant_names()),
                         [](const auto& info) {
                           std::string name;
                           for (char ch : info.param) name += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
                           return name;
                         });

ModelConfig small_config(const std::string& variant = "full") {
  ModelConfig c;
  c.dim = 4;
  c.heads = 2;
  c.layers = 1;
  c.levels = 3;
  c.n_items = 5;
  c.n_categories = 2;
  c.n_brands = 2;
  c.max_len = 6;
  c.variant = parse_variant(variant);
  return c;
}

TEST(Variants, NamesRoundTripAndAliases) {
  for (const auto& name : variant_names()) EXPECT_EQ(variant_name(parse_variant(name)), name);
  EXPECT_EQ(parse_variant("w/o-c"), parse_variant("wo-c"));
  EXPECT_EQ(parse_variant("wo-p"), parse_variant("-p"));
  EXPECT_EQ(parse_variant("w/o-pcb"), parse_variant("wo-pcb"));
  EXPECT_THROW(parse_variant("bogus"), Error);
  EXPECT_EQ(variant_names().size(), 14u);
}

TEST(Variants, ActiveTypes) {
  EXPECT_EQ(parse_variant("full").active_types(), (std::array<bool, 4>{true, true, true, true}));
  EXPECT_EQ(parse_variant("wo-pcb").active_types(), (std::array<bool, 4>{true, false, false, false}));
  EXPECT_EQ(parse_variant("wo-b").active_types(), (std::array<bool, 4>{true, true, true, false}));
  EXPECT_TRUE(parse_variant("-pp").active_types()[1]);
  EXPECT_FALSE(parse_variant("-pp").price_branch());
  EXPECT_FALSE(parse_variant("-p").price_branch());
}

TEST(Variants, InconsistentFlagsRejected) {
  VariantFlags f;
  f.use_price = false;
  f.single_loss = true;
  EXPECT_THROW(f.validate(), Error);
  f = {};
  f.use_price = false;
  f.uniform_levels = true;
  EXPECT_THROW(f.validate(), Error);
}

TEST(ModelConfig, HeadsMustDivideDimension) {
  auto c = small_config();
  c.dim = 10;
  c.heads = 4;
  try {
    c.validate();
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("does not divide"), std::string::npos);
  }
  c.dim = 128;
  c.heads = 16;
  EXPECT_NO_THROW(c.validate());
}

TEST(ParamSpecs, FullModelLayout) {
  const Model<double> model(small_config(), {1, 2, 3, 1, 2});
  using Shape = std::pair<Eigen::Index, Eigen::Index>;
  std::map<std::string, Shape> shapes;
  for (const auto& s : model.param_specs()) shapes[s.name] = {s.rows, s.cols};
  EXPECT_EQ(shapes.at("emb.id"), Shape(5, 4));
  EXPECT_EQ(shapes.at("emb.price"), Shape(3, 4));
  EXPECT_EQ(shapes.at("emb.position"), Shape(6, 4));
  EXPECT_EQ(shapes.at("conv.fuse.id"), Shape(4, 16));
  EXPECT_EQ(shapes.at("price.enhance.W"), Shape(4, 8));
  EXPECT_TRUE(shapes.count("conv.intra.id.brand"));
  EXPECT_TRUE(shapes.count("conv.gate.brand.price"));
  EXPECT_TRUE(shapes.count("fusion.merge.price"));
}

TEST(ParamSpecs, AblationsDropParameters) {
  auto names = [](const std::string& v) {
    const Model<double> model(small_config(v), {1, 2, 3, 1, 2});
    std::set<std::string> out;
    for (const auto& s : model.param_specs()) out.insert(s.name);
    return out;
  };
  const auto p = names("-p");
  EXPECT_FALSE(p.count("emb.price"));
  EXPECT_FALSE(p.count("price.query"));
  EXPECT_FALSE(p.count("fusion.merge.price"));
  EXPECT_TRUE(p.count("interest.z"));
  const auto pp = names("-pp");
  EXPECT_TRUE(pp.count("emb.price"));
  EXPECT_FALSE(pp.count("price.query"));
  const auto gcn = names("gcn");
  EXPECT_FALSE(std::any_of(gcn.begin(), gcn.end(), [](const auto& n) { return n.rfind("conv.", 0) == 0; }));
  const auto bip = names("-BiP");
  EXPECT_FALSE(bip.count("fusion.merge.price"));
  EXPECT_TRUE(bip.count("price.query"));
  const auto id_only = names("wo-pcb");
  EXPECT_FALSE(std::any_of(id_only.begin(), id_only.end(), [](const auto& n) { return n.rfind("conv.", 0) == 0; }));
}

TEST(InitParams, DeterministicBoundedAndZeroBiases) {
  const Model<double> model(small_config(), {1, 2, 3, 1, 2});
  const auto a = model.init_params(9), b = model.init_params(9), c = model.init_params(10);
  bool differs = false;
  for (std::size_t i = 0; i < a.params().size(); ++i) {
    const auto& p = a.params()[i];
    EXPECT_EQ(p.value, b.params()[i].value) << p.name;
    differs |= p.value != c.params()[i].value;
    EXPECT_LE(p.value.cwiseAbs().maxCoeff(), 0.5) << p.name;
    if (p.name.ends_with(".b")) {
      EXPECT_EQ(p.value.norm(), 0.0) << p.name;
    }
  }
  EXPECT_TRUE(differs);
}

struct SmallProblem {
  SessionSet train;
  ItemCatalog catalog;
  HeteroHypergraph graph;
  NeighborIndex index;
};

SmallProblem small_problem(const ModelConfig& c) {
  SmallProblem p;
  p.catalog.categories = {"c0", "c1"};
  p.catalog.brands = {"b0", "b1"};
  p.catalog.levels = 3;
  p.catalog.items = {{"i0", 1, 0, 0, 1}, {"i1", 2, 1, 1, 2}, {"i2", 3, 0, 1, 3}, {"i3", 4, 1, 0, 1},
                     {"i4", 5, 0, 0, 2}};
  p.train.catalog = p.catalog;
  p.train.sessions = {{"a", {0, 1}, 2, {1, 2, 3}}, {"b", {3, 4, 0}, 1, {4, 5, 6, 7}}};
  p.graph = HeteroHypergraph::build(p.train, p.catalog);
  p.index = NeighborIndex::build(p.graph, c.variant.active_types(), c.neighbor_cap, 0);
  return p;
}

TEST(Gradients, PositionRowsBeyondLongestPrefixStayZero) {
  const auto c = small_config();
  const auto prob = small_problem(c);
  const Model<double> model(c, {1, 2, 3, 1, 2});
  auto store = model.init_params(3);
  const auto batch = model.make_batch({&prob.train.sessions[0], &prob.train.sessions[1]});
  loss_and_gradients(model, store, prob.index, batch);
  const auto& g = store.at("emb.position").grad;
  for (Eigen::Index r = 0; r < 3; ++r) EXPECT_GT(g.row(r).norm(), 0.0) << r;
  for (Eigen::Index r = 3; r < g.rows(); ++r) EXPECT_EQ(g.row(r).norm(), 0.0) << r;
}

TEST(Forward, ShapesAndDistributions) {
  for (const auto& v : variant_names()) {
    const auto c = small_config(v);
    const auto prob = small_problem(c);
    const Model<double> model(c, {1, 2, 3, 1, 2});
    const auto store = model.init_params(4);
    ad::Tape<double> tape;
    ParamBinder<double> bind(tape, store, false);
    const auto batch = model.make_batch({&prob.train.sessions[0], &prob.train.sessions[1]});
    const auto out = model.forward(bind, prob.index, batch);
    EXPECT_EQ(out.scores.rows(), 2) << v;
    EXPECT_EQ(out.scores.cols(), 5) << v;
    EXPECT_EQ(out.price_logits.valid(), c.variant.price_branch()) << v;
    const double loss = model.loss(out, batch).value()(0, 0);
    EXPECT_TRUE(std::isfinite(loss) && loss > 0) << v;
  }
}

TEST(Forward, FloatTracksDouble) {
  const auto c = small_config();
  const auto prob = small_problem(c);
  const Model<double> md(c, {1, 2, 3, 1, 2});
  const Model<float> mf(c, {1, 2, 3, 1, 2});
  const auto sd = md.init_params(5);
  const auto sf = cast_store<float>(sd);
  std::vector<const Session*> sessions{&prob.train.sessions[0], &prob.train.sessions[1]};
  EXPECT_NEAR(evaluate_loss(md, sd, prob.index, md.make_batch(sessions)),
              evaluate_loss(mf, sf, prob.index, mf.make_batch(sessions)), 1e-4);
}

TEST(Forward, BatchCompositionDoesNotChangeScores) {
  const auto c = small_config();
  const auto prob = small_problem(c);
  const Model<double> model(c, {1, 2, 3, 1, 2});
  const auto store = model.init_params(6);
  auto scores = [&](std::vector<const Session*> s) {
    ad::Tape<double> tape;
    ParamBinder<double> bind(tape, store, false);
    return model.forward(bind, prob.index, model.make_batch(s)).scores.value();
  };
  const auto both = scores({&prob.train.sessions[0], &prob.train.sessions[1]});
  EXPECT_TRUE(testing::matrices_near_rel(both.row(1), scores({&prob.train.sessions[1]}), 1e-12));
}

TEST(TopK, TiesByAscendingIndex) {
  const std::vector<double> s{0.5, 0.9, 0.5, 0.9, 0.1};
  EXPECT_EQ(top_k(s, 4), (std::vector<int>{1, 3, 0, 2}));
  EXPECT_EQ(top_k(s, 10).size(), 5u);
}

}  // namespace
}  // namespace hyperprice
