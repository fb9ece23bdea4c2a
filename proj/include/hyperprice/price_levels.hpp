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

#include <span>
#include <vector>

#include "hyperprice/dataset.hpp"

namespace hyperprice {

/// Logistic distribution parameterized by mean and standard deviation.
struct LogisticFit {
  double mu = 0.0;
  double delta = 1.0;  // standard deviation, > 0
  int n_samples = 0;
  bool flagged = false;  // degenerate sample or Newton fallback

  /// Scale parameter s = sqrt(3) * delta / pi.
  double scale() const;
};

double logistic_cdf(double x, const LogisticFit& fit);
double logistic_quantile(double p, const LogisticFit& fit);

/// Maximum-likelihood fit: damped Newton on (mu, s) started from the moment estimates.
/// Fewer than two distinct values yield a flagged degenerate fit.
LogisticFit fit_logistic(std::span<const double> prices);

enum class LevelMethod { kLogistic, kUniform };

struct CategoryLevels {
  LogisticFit fit;
  double min = 0.0;
  double max = 0.0;
  bool degenerate = false;  // CDF(max) == CDF(min), or min == max for uniform
  int n_items = 0;
};

struct LevelScheme {
  int rho = 5;
  LevelMethod method = LevelMethod::kLogistic;
  std::vector<CategoryLevels> categories;

  int assign(double price, int category) const;
  /// The rho - 1 prices at which the assigned level steps up.
  std::vector<double> cut_prices(int category) const;
};

/// Rounds rho * fraction half away from zero and clamps into [1, rho].
int level_from_fraction(double fraction, int rho);

int assign_level(double price, const LevelScheme& scheme, int category);
int assign_level_uniform(double price, double min, double max, int rho);

/// Fits one distribution per category over the catalog's item prices.
LevelScheme fit_level_scheme(const ItemCatalog& catalog, int rho,
                             LevelMethod method = LevelMethod::kLogistic);

std::vector<int> assign_levels(const ItemCatalog& catalog, const LevelScheme& scheme);

/// Adapter for apply_core_filter: refits the scheme on each candidate catalog.
LevelAssigner level_assigner(int rho, LevelMethod method = LevelMethod::kLogistic);

}  // namespace hyperprice
