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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hyperprice/dataset.hpp"
#include "hyperprice/kernels.hpp"

namespace hyperprice::testing {

/// |a - b| <= rel * max(|a|, |b|), with exact zeros treated as equal.
inline ::testing::AssertionResult near_rel(double a, double b, double rel) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (std::abs(a - b) <= rel * scale || (a == 0.0 && b == 0.0)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a << " vs " << b << " (rel tol " << rel << ")";
}

template <typename A, typename B>
::testing::AssertionResult matrices_near_rel(const A& a, const B& b, double rel, double abs_floor = 0.0) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return ::testing::AssertionFailure() << "shape " << a.rows() << "x" << a.cols() << " vs " << b.rows()
                                         << "x" << b.cols();
  }
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const double x = static_cast<double>(a(r, c)), y = static_cast<double>(b(r, c));
      if (std::abs(x - y) <= abs_floor) continue;
      if (!near_rel(x, y, rel)) {
        return ::testing::AssertionFailure() << "(" << r << "," << c << "): " << x << " vs " << y;
      }
    }
  }
  return ::testing::AssertionSuccess();
}

inline Matrix<double> random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                                    double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix<double> m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

inline Matrix<double> rows_of(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix<double> m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

inline Event event(std::string session, std::int64_t t, std::string item, double price = 1.0,
                   std::string category = "c", std::string brand = "b") {
  return {std::move(session), t, std::move(item), price, std::move(category), std::move(brand)};
}

}  // namespace hyperprice::testing
