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

#include "hyperprice/preference.hpp"
#include "test_util.hpp"

namespace hyperprice {
namespace {

using testing::matrices_near_rel;
using testing::near_rel;
using testing::rows_of;

SessionBatch batch_of(const std::vector<std::vector<int>>& prefixes, int n_items = 4, int max_len = 19) {
  SessionBatch b;
  const std::vector<int> levels(n_items, 0);
  for (const auto& p : prefixes) b.add(p, 0, levels, max_len);
  b.finalize();
  return b;
}

Vector<double> vec(std::initializer_list<double> v) {
  Vector<double> out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// ---------------------------------------------------------------------------------------
// d = 2 hand cases; expected values come from tests/oracles/layer_oracles.py.

TEST(PositionEnhance, HandOracle) {
  ad::Tape<double> tape;
  auto out = pref::position_enhance(tape.constant(rows_of({{0.3, -0.7}})), tape.constant(rows_of({{0.1, 0.2}})),
                                    tape.constant(rows_of({{0.5, -0.4, 0.3, 0.2}, {-0.1, 0.6, 0.7, -0.2}})),
                                    tape.constant(rows_of({{0.05, -0.1}})));
  EXPECT_TRUE(matrices_near_rel(out.value(), rows_of({{0.5005202111902352, -0.477700012168498}}), 1e-6));
}

TEST(PositionEnhance, ZeroParametersGiveZeros) {
  ad::Tape<double> tape;
  auto out = pref::position_enhance(tape.constant(rows_of({{1, 2}, {3, 4}})), tape.constant(rows_of({{5, 6}, {7, 8}})),
                                    tape.constant(Matrix<double>::Zero(2, 4)), tape.constant(Matrix<double>::Zero(1, 2)));
  EXPECT_EQ(out.value().norm(), 0.0);
}

const Matrix<double> kE = rows_of({{0.5, -0.3}, {0.2, 0.8}});
const Matrix<double> kWQ = rows_of({{0.4, 0.1}, {-0.3, 0.6}});
const Matrix<double> kWK = rows_of({{0.2, -0.5}, {0.7, 0.3}});
const Matrix<double> kWV = rows_of({{1.0, 0.2}, {-0.4, 0.9}});

TEST(PricePreference, SingleHeadOracle) {
  ad::Tape<double> tape;
  const auto batch = batch_of({{0, 1}});
  auto u = pref::price_preference(batch, tape.constant(kE), tape.constant(kWQ), tape.constant(kWK),
                                  tape.constant(kWV), 1);
  EXPECT_TRUE(matrices_near_rel(u.value(), rows_of({{0.40066744684572453, 0.07573917501557326}}), 1e-6));
}

TEST(PricePreference, TwoHeadOracle) {
  ad::Tape<double> tape;
  const auto batch = batch_of({{0, 1}});
  auto u = pref::price_preference(batch, tape.constant(kE), tape.constant(kWQ), tape.constant(kWK),
                                  tape.constant(kWV), 2);
  EXPECT_TRUE(matrices_near_rel(u.value(), rows_of({{0.401950451950991, 0.09898304019535545}}), 1e-6));
}

TEST(PricePreference, SingletonReturnsValueProjection) {
  ad::Tape<double> tape;
  const auto batch = batch_of({{2}});
  const auto e = rows_of({{0.7, -1.1}});
  auto u = pref::price_preference(batch, tape.constant(e), tape.constant(kWQ), tape.constant(kWK),
                                  tape.constant(Matrix<double>::Identity(2, 2)), 1);
  EXPECT_TRUE(matrices_near_rel(u.value(), e, 1e-15));
  auto zero = pref::price_preference(batch, tape.constant(e), tape.constant(Matrix<double>::Zero(2, 2)),
                                     tape.constant(Matrix<double>::Zero(2, 2)),
                                     tape.constant(Matrix<double>::Zero(2, 2)), 1);
  EXPECT_EQ(zero.value().norm(), 0.0);
}

TEST(PricePreference, SessionsInOneBatchAreIndependent) {
  std::mt19937_64 rng(3);
  const auto e1 = testing::random_matrix(3, 4, rng);
  const auto e2 = testing::random_matrix(2, 4, rng);
  const auto wq = testing::random_matrix(4, 4, rng), wk = testing::random_matrix(4, 4, rng),
             wv = testing::random_matrix(4, 4, rng);
  auto run = [&](const SessionBatch& b, const Matrix<double>& e) {
    ad::Tape<double> tape;
    return pref::price_preference(b, tape.constant(e), tape.constant(wq), tape.constant(wk), tape.constant(wv), 2)
        .value();
  };
  Matrix<double> both(5, 4);
  both << e1, e2;
  const auto joint = run(batch_of({{0, 1, 2}, {3, 0}}), both);
  EXPECT_TRUE(matrices_near_rel(joint.row(0), run(batch_of({{0, 1, 2}}), e1), 1e-12));
  EXPECT_TRUE(matrices_near_rel(joint.row(1), run(batch_of({{3, 0}}), e2), 1e-12));
}

TEST(InterestPreference, HandOracle) {
  ad::Tape<double> tape;
  const auto batch = batch_of({{0, 1}});
  auto u = pref::interest_preference(batch, tape.constant(rows_of({{0.2, -0.6}, {0.7, 0.1}})),
                                     tape.constant(rows_of({{1.0, 0.5}, {-0.5, 2.0}})),
                                     tape.constant(rows_of({{0.3, -0.2}, {0.1, 0.4}})),
                                     tape.constant(rows_of({{-0.5, 0.2}, {0.6, 0.1}})),
                                     tape.constant(rows_of({{0.1, -0.2}})), tape.constant(rows_of({{0.8, -0.3}})));
  EXPECT_TRUE(matrices_near_rel(u.value(), rows_of({{0.14339252299313893, 0.6148421264225241}}), 1e-6));
}

TEST(InterestPreference, ZeroAttentionVectorAndSingleton) {
  std::mt19937_64 rng(4);
  ad::Tape<double> tape;
  const auto batch = batch_of({{1}});
  auto enhanced = tape.constant(testing::random_matrix(1, 3, rng));
  auto raw = tape.constant(testing::random_matrix(1, 3, rng));
  auto a1 = tape.constant(testing::random_matrix(3, 3, rng));
  auto a2 = tape.constant(testing::random_matrix(3, 3, rng));
  auto b = tape.constant(testing::random_matrix(1, 3, rng));
  auto zero = pref::interest_preference(batch, enhanced, raw, a1, a2, b, tape.constant(Matrix<double>::Zero(1, 3)));
  EXPECT_EQ(zero.value().norm(), 0.0);
  const auto z = testing::random_matrix(1, 3, rng);
  auto single = pref::interest_preference(batch, enhanced, raw, a1, a2, b, tape.constant(z));
  const Vector<double> v = enhanced.value().row(0).transpose();
  const Vector<double> gate =
      (a1.value() * v + a2.value() * v + b.value().row(0).transpose()).unaryExpr([](double x) {
        return 1.0 / (1.0 + std::exp(-x));
      });
  const double beta = z.row(0).dot(gate.transpose());
  EXPECT_TRUE(matrices_near_rel(single.value(), (beta * raw.value()).eval(), 1e-12));
}

const Matrix<double> kW1pi = rows_of({{0.3, 0.2}, {-0.1, 0.5}});
const Matrix<double> kW2pi = rows_of({{0.4, -0.3}, {0.2, 0.1}});
const Matrix<double> kBpi = rows_of({{0.05, -0.05}});
const Matrix<double> kW1p = rows_of({{0.6, -0.2}, {0.1, 0.3}});
const Matrix<double> kW2p = rows_of({{-0.4, 0.5}, {0.2, 0.2}});
const Matrix<double> kW1I = rows_of({{0.1, 0.7}, {-0.3, 0.2}});
const Matrix<double> kW2I = rows_of({{0.3, 0.3}, {-0.6, 0.4}});

pref::FusionParams<double> fusion_params(ad::Tape<double>& tape, double scale = 1.0) {
  auto c = [&](const Matrix<double>& m) { return tape.constant(m * scale); };
  return {c(kW1pi), c(kW2pi), c(kBpi), c(kW1p), c(kW2p), c(kW1I), c(kW2I)};
}

TEST(FusePreferences, HandOracle) {
  ad::Tape<double> tape;
  auto fused = pref::fuse_preferences(tape.constant(rows_of({{0.4, -0.6}})), tape.constant(rows_of({{-0.2, 0.9}})),
                                      fusion_params(tape));
  EXPECT_TRUE(matrices_near_rel(fused.price.value(), rows_of({{0.14653913851577094, 0.2483397995589448}}), 1e-6));
  EXPECT_TRUE(matrices_near_rel(fused.interest.value(), rows_of({{0.03728391753635535, 0.2557151497993925}}), 1e-6));
}

TEST(FusePreferences, ZeroParametersAverage) {
  ad::Tape<double> tape;
  const auto up = rows_of({{1.0, -2.0}}), ui = rows_of({{3.0, 0.5}});
  auto fused = pref::fuse_preferences(tape.constant(up), tape.constant(ui), fusion_params(tape, 0.0));
  const Matrix<double> avg = (up + ui) / 2;
  EXPECT_TRUE(matrices_near_rel(fused.price.value(), avg, 1e-15));
  EXPECT_TRUE(matrices_near_rel(fused.interest.value(), avg, 1e-15));
}

TEST(FusePreferences, EqualInputsAreFixed) {
  ad::Tape<double> tape;
  const auto x = rows_of({{0.7, -1.3}});
  auto fused = pref::fuse_preferences(tape.constant(x), tape.constant(x), fusion_params(tape, 3.0));
  EXPECT_TRUE(matrices_near_rel(fused.price.value(), x, 1e-15));
  EXPECT_TRUE(matrices_near_rel(fused.interest.value(), x, 1e-15));
}

TEST(FusePreferences, OutputsBetweenInputs) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    ad::Tape<double> tape;
    const auto up = testing::random_matrix(3, 4, rng, 3.0), ui = testing::random_matrix(3, 4, rng, 3.0);
    pref::FusionParams<double> p;
    auto r = [&](int rows, int cols) { return tape.constant(testing::random_matrix(rows, cols, rng, 2.0)); };
    p = {r(4, 4), r(4, 4), r(1, 4), r(4, 4), r(4, 4), r(4, 4), r(4, 4)};
    auto fused = pref::fuse_preferences(tape.constant(up), tape.constant(ui), p);
    for (const auto* out : {&fused.price.value(), &fused.interest.value()}) {
      const Matrix<double> lo = up.cwiseMin(ui), hi = up.cwiseMax(ui);
      EXPECT_TRUE(((out->array() >= lo.array() - 1e-12) && (out->array() <= hi.array() + 1e-12)).all());
    }
  }
}

const Matrix<double> kItems = rows_of({{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}, {-1.0, 2.0}});

TEST(ScoreInterest, HandOracle) {
  const auto p = score_interest<double>(vec({0.5, -1.0}), kItems);
  const auto want = vec({0.5729727226821512, 0.12784749537275025, 0.27065314982800115, 0.028526632117097408});
  EXPECT_TRUE(matrices_near_rel(p, want, 1e-6));
}

TEST(ScoreInterest, ZeroPreferenceIsUniformAndScalingKeepsArgmax) {
  const auto uniform = score_interest<double>(vec({0.0, 0.0}), kItems);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(uniform[i], 0.25, 1e-15);
  Eigen::Index a, b;
  score_interest<double>(vec({0.2, 0.9}), kItems).maxCoeff(&a);
  score_interest<double>(vec({2.0, 9.0}), kItems).maxCoeff(&b);
  EXPECT_EQ(a, b);
}

TEST(ScorePrice, HandOracle) {
  const auto levels = rows_of({{1.0, -1.0}, {0.5, 0.0}, {0.0, 0.5}, {-0.5, 1.0}, {1.0, 1.0}});
  const auto p = score_price<double>(vec({0.3, 0.8}), levels);
  const auto want =
      vec({0.07414894102810238, 0.14203532396747373, 0.1823769660417138, 0.23417665981595764, 0.36726210914675234});
  EXPECT_TRUE(matrices_near_rel(p, want, 1e-6));
  EXPECT_NEAR(p.sum(), 1.0, 1e-6);
  const auto uniform = score_price<double>(vec({0.0, 0.0}), levels);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(uniform[i], 0.2, 1e-15);
}

TEST(JointLoss, Examples) {
  const std::vector<double> ui(4, 0.25), up(5, 0.2);
  EXPECT_NEAR(joint_loss(ui, 3, up, 1), std::log(4.0) + std::log(5.0), 1e-12);
  EXPECT_NEAR(joint_loss(ui, 3, up, 1), 2.99573, 1e-5);
  const std::vector<double> one_i{0, 1, 0, 0}, one_p{0, 0, 0, 0, 1};
  EXPECT_EQ(joint_loss(one_i, 1, one_p, 4), 0.0);
  const std::vector<double> yi{0.1, 0.2, 0.3, 0.4}, yp{0.05, 0.15, 0.6, 0.1, 0.1};
  EXPECT_TRUE(near_rel(joint_loss(yi, 2, yp, 2), 1.7147984280919268, 1e-6));
}

TEST(JointLoss, ZeroProbabilityIsClampedAndFlagged) {
  const std::vector<double> yi{0.0, 1.0}, yp{1.0, 0.0};
  int clamped = 0;
  const double loss = joint_loss(yi, 0, yp, 1, &clamped);
  EXPECT_EQ(clamped, 2);
  EXPECT_NEAR(loss, -2.0 * std::log(1e-12), 1e-9);
  EXPECT_THROW(joint_loss(yi, 5, yp, 0), Error);
}

TEST(ScoreItems, HandOracle) {
  const auto levels = rows_of({{0.2, 0.1}, {-0.3, 0.4}, {0.6, -0.5}});
  const auto p = score_items<double>(vec({0.3, -0.4}), vec({0.5, 0.2}), levels, kItems, {0, 2, 2, 1});
  const auto want = vec({0.2692176905292481, 0.2858651827804942, 0.3321279581581577, 0.1127891685320999});
  EXPECT_TRUE(matrices_near_rel(p, want, 1e-6));
}

TEST(ScoreItems, ZeroPricePreferenceMatchesInterestArgmax) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto items = testing::random_matrix(7, 3, rng);
    const auto levels = testing::random_matrix(4, 3, rng);
    const Vector<double> ui = testing::random_matrix(3, 1, rng).col(0);
    std::vector<int> item_levels(7);
    for (auto& l : item_levels) l = static_cast<int>(rng() % 4);
    Eigen::Index a, b;
    score_items<double>(Vector<double>::Zero(3), ui, levels, items, item_levels).maxCoeff(&a);
    score_interest<double>(ui, items).maxCoeff(&b);
    EXPECT_EQ(a, b);
  }
}

TEST(ScoreItems, PriceTermSeparatesIdenticalItems) {
  const auto items = rows_of({{0.3, 0.3}, {0.3, 0.3}});
  const auto levels = rows_of({{1.0, 0.0}, {0.0, 1.0}});
  const auto p = score_items<double>(vec({0.0, 2.0}), vec({1.0, 1.0}), levels, items, {0, 1});
  EXPECT_GT(p[1], p[0]);
}

TEST(Distributions, SumToOneAndStrictlyPositive) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto items = testing::random_matrix(20, 4, rng, 5.0);
    const auto levels = testing::random_matrix(5, 4, rng, 5.0);
    const Vector<double> up = testing::random_matrix(4, 1, rng, 3.0).col(0);
    const Vector<double> ui = testing::random_matrix(4, 1, rng, 3.0).col(0);
    std::vector<int> item_levels(20);
    for (auto& l : item_levels) l = static_cast<int>(rng() % 5);
    for (const auto& p : {score_interest<double>(ui, items), score_price<double>(up, levels),
                          score_items<double>(up, ui, levels, items, item_levels)}) {
      EXPECT_NEAR(p.sum(), 1.0, 1e-6);
      EXPECT_TRUE((p.array() > 0).all());
    }
  }
}

TEST(SessionBatch, ReversedPositionsAnchorAtTail) {
  const auto b = batch_of({{0, 1, 2}, {3}});
  EXPECT_EQ(b.positions, (std::vector<int>{2, 1, 0, 0}));
  EXPECT_EQ(b.last, (std::vector<int>{2, 3}));
  // Prepending an item keeps the position of the last item at 0.
  const auto longer = batch_of({{3, 0, 1, 2}});
  EXPECT_EQ(longer.positions.back(), 0);
  EXPECT_EQ(longer.positions.front(), 3);
}

TEST(SessionBatch, RejectsOverlongAndEmptyPrefixes) {
  try {
    batch_of({{0, 1, 2}}, 4, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("exceeds the position table"), std::string::npos);
  }
  EXPECT_THROW(batch_of({{}}), Error);
  EXPECT_THROW(batch_of({{7}}), Error);
}

}  // namespace
}  // namespace hyperprice
