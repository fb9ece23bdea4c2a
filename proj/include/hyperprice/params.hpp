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

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperprice/tape.hpp"

namespace hyperprice {

enum class ParamInit { kUniform, kZero };

template <typename T>
struct Param {
  std::string name;
  Matrix<T> value;
  Matrix<T> grad;
  Matrix<T> first_moment;
  Matrix<T> second_moment;
};

/// Named dense parameters with paired gradient buffers and Adam moments.
/// Iteration order is insertion order.
template <typename T>
class ParameterStore {
 public:
  Param<T>& add(const std::string& name, Eigen::Index rows, Eigen::Index cols);
  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  Param<T>& at(const std::string& name);
  const Param<T>& at(const std::string& name) const;

  std::vector<Param<T>>& params() { return params_; }
  const std::vector<Param<T>>& params() const { return params_; }
  std::size_t scalar_count() const;

  void zero_grad();

  /// Adam steps taken so far.
  std::int64_t step = 0;

 private:
  std::vector<Param<T>> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Fills uniform parameters from U(-bound, +bound) and zero ones with 0. Each parameter draws
/// from its own stream keyed by (seed, name), so values do not depend on declaration order.
template <typename T>
void initialize(ParameterStore<T>& store, const std::vector<std::pair<std::string, ParamInit>>& plan,
                double bound, std::uint64_t seed);

/// Converts between precisions, copying values, gradients, moments and the step counter.
template <typename To, typename From>
ParameterStore<To> cast_store(const ParameterStore<From>& from);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam update of every parameter from its gradient buffer.
template <typename T>
void adam_step(ParameterStore<T>& store, const AdamConfig& config);

/// Binds store parameters to tape variables on first use and copies tape gradients back.
template <typename T>
class ParamBinder {
 public:
  ParamBinder(ad::Tape<T>& tape, const ParameterStore<T>& store, bool trainable = true)
      : tape_(tape), store_(store), trainable_(trainable) {}

  ad::Var<T> operator()(const std::string& name);

  /// Adds tape gradients into the store's gradient buffers.
  void accumulate_grads(ParameterStore<T>& store) const;

 private:
  ad::Tape<T>& tape_;
  const ParameterStore<T>& store_;
  bool trainable_;
  std::unordered_map<std::string, ad::Var<T>> bound_;
};

/// Numerically stable softmax of a vector.
template <typename T>
Vector<T> softmax(const Vector<T>& logits);

struct GradCheckEntry {
  std::string name;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t checked = 0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  bool passed(double tolerance) const { return max_rel_error <= tolerance; }
};

/// Central finite differences of `loss` against the analytic gradients in `store.grad`.
/// `loss` must evaluate the objective from the store's current values. Relative error is
/// |analytic - numeric| / max(|analytic|, |numeric|); pairs with absolute error below
/// `abs_floor` count as exact.
GradCheckReport finite_difference_check(ParameterStore<double>& store,
                                        const std::function<double()>& loss, double step = 1e-5,
                                        double abs_floor = 1e-8);

}  // namespace hyperprice
