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

#include "hyperprice/price_levels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hyperprice {

namespace {

constexpr double kPriceEpsilon = 1e-6;
constexpr int kMaxNewtonIterations = 100;
constexpr double kTolerance = 1e-8;

struct LogLikelihood {
  double value = 0.0;
  double g_mu = 0.0, g_s = 0.0;
  double h_mumu = 0.0, h_mus = 0.0, h_ss = 0.0;
};

// Log-likelihood of the logistic(mu, s) density and its first two derivatives.
LogLikelihood log_likelihood(std::span<const double> x, double mu, double s) {
  LogLikelihood ll;
  double sum_t = 0, sum_dt = 0, sum_zt1 = 0, sum_mixed = 0, sum_ss = 0;
  for (double xi : x) {
    const double z = (xi - mu) / s;
    const double t = std::tanh(0.5 * z);
    const double dt = 0.5 * (1.0 - t * t);
    // log f = -z - log s - 2 log(1 + e^{-z}), written stably for both signs of z.
    ll.value += -std::abs(z) - 2.0 * std::log1p(std::exp(-std::abs(z))) - std::log(s);
    sum_t += t;
    sum_dt += dt;
    sum_zt1 += z * t - 1.0;
    sum_mixed += t + z * dt;
    sum_ss += 2.0 * z * t - 1.0 + z * z * dt;
  }
  const double inv_s = 1.0 / s, inv_s2 = inv_s * inv_s;
  ll.g_mu = inv_s * sum_t;
  ll.g_s = inv_s * sum_zt1;
  ll.h_mumu = -inv_s2 * sum_dt;
  ll.h_mus = -inv_s2 * sum_mixed;
  ll.h_ss = -inv_s2 * sum_ss;
  return ll;
}

}  // namespace

double LogisticFit::scale() const { return std::sqrt(3.0) * delta / std::numbers::pi; }

double logistic_cdf(double x, const LogisticFit& fit) {
  return 1.0 / (1.0 + std::exp(-(x - fit.mu) / fit.scale()));
}

double logistic_quantile(double p, const LogisticFit& fit) {
  return fit.mu + fit.scale() * std::log(p / (1.0 - p));
}

LogisticFit fit_logistic(std::span<const double> prices) {
  if (prices.empty()) throw Error("cannot fit a logistic distribution to an empty sample");
  const double n = static_cast<double>(prices.size());
  double mean = 0.0;
  for (double p : prices) mean += p;
  mean /= n;
  double var = 0.0;
  for (double p : prices) var += (p - mean) * (p - mean);
  const double sd = prices.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;

  LogisticFit fit;
  fit.n_samples = static_cast<int>(prices.size());
  fit.mu = mean;
  const auto [lo, hi] = std::minmax_element(prices.begin(), prices.end());
  if (*lo == *hi) {
    fit.delta = std::max(kPriceEpsilon, 0.01 * std::abs(mean));
    fit.flagged = true;
    return fit;
  }
  fit.delta = sd;

  const double to_scale = std::sqrt(3.0) / std::numbers::pi;
  double mu = mean, s = sd * to_scale;
  auto ll = log_likelihood(prices, mu, s);
  bool converged = false;
  for (int iter = 0; iter < kMaxNewtonIterations && !converged; ++iter) {
    // Newton direction when the Hessian is negative definite, gradient ascent otherwise.
    double d_mu, d_s;
    const double det = ll.h_mumu * ll.h_ss - ll.h_mus * ll.h_mus;
    if (ll.h_mumu < 0 && det > 0) {
      d_mu = -(ll.h_ss * ll.g_mu - ll.h_mus * ll.g_s) / det;
      d_s = -(-ll.h_mus * ll.g_mu + ll.h_mumu * ll.g_s) / det;
    } else {
      d_mu = ll.g_mu * s * s / n;
      d_s = ll.g_s * s * s / n;
    }
    double step = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, step *= 0.5) {
      const double mu_new = mu + step * d_mu;
      const double s_new = s + step * d_s;
      if (!(s_new > 0.0)) continue;
      auto ll_new = log_likelihood(prices, mu_new, s_new);
      if (ll_new.value >= ll.value - 1e-12 * std::abs(ll.value)) {
        converged = std::abs(mu_new - mu) < kTolerance * (1.0 + std::abs(mu)) &&
                    std::abs(s_new - s) < kTolerance * (1.0 + s);
        mu = mu_new;
        s = s_new;
        ll = ll_new;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (converged && std::isfinite(mu) && std::isfinite(s)) {
    fit.mu = mu;
    fit.delta = s / to_scale;
  } else {
    fit.flagged = true;  // keep the moment estimates
  }
  return fit;
}

int level_from_fraction(double fraction, int rho) {
  const long raw = std::lround(fraction * rho);
  return static_cast<int>(std::clamp<long>(raw, 1, rho));
}

int assign_level(double price, const LevelScheme& scheme, int category) {
  const auto& c = scheme.categories.at(category);
  if (c.degenerate) return 1;
  const double x = std::clamp(price, c.min, c.max);
  const double lo = logistic_cdf(c.min, c.fit);
  const double hi = logistic_cdf(c.max, c.fit);
  if (!(hi > lo)) return 1;
  return level_from_fraction((logistic_cdf(x, c.fit) - lo) / (hi - lo), scheme.rho);
}

int assign_level_uniform(double price, double min, double max, int rho) {
  if (!(max > min)) return 1;
  const double x = std::clamp(price, min, max);
  const auto raw = static_cast<long>(std::floor((x - min) / (max - min) * rho));
  return static_cast<int>(std::clamp<long>(raw, 1, rho));
}

int LevelScheme::assign(double price, int category) const {
  if (method == LevelMethod::kUniform) {
    const auto& c = categories.at(category);
    return assign_level_uniform(price, c.min, c.max, rho);
  }
  return assign_level(price, *this, category);
}

std::vector<double> LevelScheme::cut_prices(int category) const {
  const auto& c = categories.at(category);
  std::vector<double> cuts;
  if (c.degenerate) return cuts;
  if (method == LevelMethod::kUniform) {
    for (int k = 1; k < rho; ++k) cuts.push_back(c.min + (c.max - c.min) * k / rho);
    return cuts;
  }
  // Level k+1 starts where rho * fraction reaches k + 0.5.
  const double lo = logistic_cdf(c.min, c.fit), hi = logistic_cdf(c.max, c.fit);
  for (int k = 1; k < rho; ++k) {
    const double p = lo + (hi - lo) * (k + 0.5) / rho;
    cuts.push_back(logistic_quantile(p, c.fit));
  }
  return cuts;
}

LevelScheme fit_level_scheme(const ItemCatalog& catalog, int rho, LevelMethod method) {
  if (rho < 2) throw Error("rho must be at least 2");
  LevelScheme scheme;
  scheme.rho = rho;
  scheme.method = method;
  const int n_categories = static_cast<int>(catalog.categories.size());
  std::vector<std::vector<double>> prices(n_categories);
  for (const auto& item : catalog.items) prices.at(item.category).push_back(item.price);

  scheme.categories.resize(n_categories);
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < n_categories; ++c) {
    auto& out = scheme.categories[c];
    const auto& p = prices[c];
    out.n_items = static_cast<int>(p.size());
    if (p.empty()) {
      out.degenerate = true;
      continue;
    }
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    out.min = *lo;
    out.max = *hi;
    out.fit = fit_logistic(p);
    if (method == LevelMethod::kUniform) {
      out.degenerate = !(out.max > out.min);
    } else {
      out.degenerate = !(logistic_cdf(out.max, out.fit) > logistic_cdf(out.min, out.fit));
    }
  }
  return scheme;
}

std::vector<int> assign_levels(const ItemCatalog& catalog, const LevelScheme& scheme) {
  std::vector<int> levels;
  levels.reserve(catalog.items.size());
  for (const auto& item : catalog.items) levels.push_back(scheme.assign(item.price, item.category));
  return levels;
}

LevelAssigner level_assigner(int rho, LevelMethod method) {
  return [rho, method](const ItemCatalog& catalog) {
    return assign_levels(catalog, fit_level_scheme(catalog, rho, method));
  };
}

}  // namespace hyperprice
