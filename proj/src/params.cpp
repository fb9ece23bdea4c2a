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

#include "hyperprice/params.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hyperprice {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

template <typename T>
Param<T>& ParameterStore<T>::add(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  if (contains(name)) throw Error("duplicate parameter '" + name + "'");
  Param<T> p;
  p.name = name;
  p.value = Matrix<T>::Zero(rows, cols);
  p.grad = Matrix<T>::Zero(rows, cols);
  p.first_moment = Matrix<T>::Zero(rows, cols);
  p.second_moment = Matrix<T>::Zero(rows, cols);
  index_.emplace(name, params_.size());
  params_.push_back(std::move(p));
  return params_.back();
}

template <typename T>
Param<T>& ParameterStore<T>::at(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("unknown parameter '" + name + "'");
  return params_[it->second];
}

template <typename T>
const Param<T>& ParameterStore<T>::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("unknown parameter '" + name + "'");
  return params_[it->second];
}

template <typename T>
std::size_t ParameterStore<T>::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

template <typename T>
void ParameterStore<T>::zero_grad() {
  for (auto& p : params_) p.grad.setZero();
}

template <typename T>
void initialize(ParameterStore<T>& store, const std::vector<std::pair<std::string, ParamInit>>& plan,
                double bound, std::uint64_t seed) {
  for (const auto& [name, init] : plan) {
    auto& p = store.at(name);
    if (init == ParamInit::kZero) {
      p.value.setZero();
      continue;
    }
    std::mt19937_64 rng(mix_seed(seed, fnv1a(name)));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value.data()[i] = static_cast<T>(u(rng));
  }
}

template <typename To, typename From>
ParameterStore<To> cast_store(const ParameterStore<From>& from) {
  ParameterStore<To> to;
  for (const auto& p : from.params()) {
    auto& q = to.add(p.name, p.value.rows(), p.value.cols());
    q.value = p.value.template cast<To>();
    q.grad = p.grad.template cast<To>();
    q.first_moment = p.first_moment.template cast<To>();
    q.second_moment = p.second_moment.template cast<To>();
  }
  to.step = from.step;
  return to;
}

template <typename T>
void adam_step(ParameterStore<T>& store, const AdamConfig& config) {
  ++store.step;
  const double t = static_cast<double>(store.step);
  const T b1 = static_cast<T>(config.beta1), b2 = static_cast<T>(config.beta2);
  const T correction1 = static_cast<T>(1.0 - std::pow(config.beta1, t));
  const T correction2 = static_cast<T>(1.0 - std::pow(config.beta2, t));
  const T lr = static_cast<T>(config.learning_rate), eps = static_cast<T>(config.epsilon);
  for (auto& p : store.params()) {
    p.first_moment = b1 * p.first_moment + (T(1) - b1) * p.grad;
    p.second_moment = b2 * p.second_moment + (T(1) - b2) * p.grad.cwiseProduct(p.grad);
    auto m_hat = p.first_moment.array() / correction1;
    auto v_hat = p.second_moment.array() / correction2;
    p.value.array() -= lr * m_hat / (v_hat.sqrt() + eps);
  }
}

template <typename T>
ad::Var<T> ParamBinder<T>::operator()(const std::string& name) {
  auto it = bound_.find(name);
  if (it != bound_.end()) return it->second;
  const auto& value = store_.at(name).value;
  auto v = trainable_ ? tape_.variable(value) : tape_.constant(value);
  bound_.emplace(name, v);
  return v;
}

template <typename T>
void ParamBinder<T>::accumulate_grads(ParameterStore<T>& store) const {
  for (const auto& [name, var] : bound_) store.at(name).grad += tape_.grad(var);
}

template <typename T>
Vector<T> softmax(const Vector<T>& logits) {
  const T m = logits.maxCoeff();
  Vector<T> p = (logits.array() - m).exp().matrix();
  return p / p.sum();
}

GradCheckReport finite_difference_check(ParameterStore<double>& store,
                                        const std::function<double()>& loss, double step,
                                        double abs_floor) {
  GradCheckReport report;
  for (auto& p : store.params()) {
    GradCheckEntry entry;
    entry.name = p.name;
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      double& x = p.value.data()[i];
      const double saved = x;
      x = saved + step;
      const double up = loss();
      x = saved - step;
      const double down = loss();
      x = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double analytic = p.grad.data()[i];
      const double abs_err = std::abs(analytic - numeric);
      const double denom = std::max(std::abs(analytic), std::abs(numeric));
      const double rel = abs_err < abs_floor ? 0.0 : abs_err / denom;
      entry.max_rel_error = std::max(entry.max_rel_error, rel);
      entry.max_abs_error = std::max(entry.max_abs_error, abs_err);
      ++entry.checked;
    }
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

template class ParameterStore<float>;
template class ParameterStore<double>;
template class ParamBinder<float>;
template class ParamBinder<double>;
template void initialize(ParameterStore<float>&, const std::vector<std::pair<std::string, ParamInit>>&,
                         double, std::uint64_t);
template void initialize(ParameterStore<double>&, const std::vector<std::pair<std::string, ParamInit>>&,
                         double, std::uint64_t);
template ParameterStore<double> cast_store(const ParameterStore<float>&);
template ParameterStore<float> cast_store(const ParameterStore<double>&);
template ParameterStore<double> cast_store(const ParameterStore<double>&);
template void adam_step(ParameterStore<float>&, const AdamConfig&);
template void adam_step(ParameterStore<double>&, const AdamConfig&);
template Vector<float> softmax(const Vector<float>&);
template Vector<double> softmax(const Vector<double>&);

}  // namespace hyperprice
