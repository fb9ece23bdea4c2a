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

// OpenMP kernels against their serial references on a random neighbor structure.
// Arguments are {rows, dimension}; every row has 1..16 neighbors among `rows` columns.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <utility>

#include "hyperprice/kernels.hpp"

namespace hyperprice {
namespace {

struct Problem {
  Csr csr;
  CsrTranspose tr;
  Matrix<float> x, q, k, v, d_out;
  Vector<float> w;

  Problem(int rows, int dim) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    std::vector<std::vector<int>> lists(rows);
    for (auto& l : lists) {
      const int deg = 1 + static_cast<int>(rng() % 16);
      for (int e = 0; e < deg; ++e) l.push_back(static_cast<int>(rng() % rows));
    }
    csr = Csr::from_lists(lists);
    tr = CsrTranspose(csr, rows);
    auto fill = [&](Matrix<float>& m) {
      m.resize(rows, dim);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    };
    fill(x);
    fill(q);
    fill(k);
    fill(v);
    fill(d_out);
    w.resize(csr.nnz());
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = u(rng);
  }
};

Problem& problem(const benchmark::State& state) {
  static std::unique_ptr<Problem> cached;
  static std::pair<int64_t, int64_t> key{-1, -1};
  if (key != std::pair{state.range(0), state.range(1)}) {
    cached = std::make_unique<Problem>(static_cast<int>(state.range(0)),
                                       static_cast<int>(state.range(1)));
    key = {state.range(0), state.range(1)};
  }
  return *cached;
}

void set_counters(benchmark::State& state, const Problem& p) {
  state.SetItemsProcessed(state.iterations() * p.csr.nnz());
}

void BM_MeanParallel(benchmark::State& state) {
  auto& p = problem(state);
  Matrix<float> out;
  for (auto _ : state) {
    kernels::csr_mean(p.csr, p.x, out);
    benchmark::DoNotOptimize(out.data());
  }
  set_counters(state, p);
}

void BM_MeanSerial(benchmark::State& state) {
  auto& p = problem(state);
  Matrix<float> out;
  for (auto _ : state) {
    kernels::serial::csr_mean(p.csr, p.x, out);
    benchmark::DoNotOptimize(out.data());
  }
  set_counters(state, p);
}

void BM_MeanBackwardParallel(benchmark::State& state) {
  auto& p = problem(state);
  Matrix<float> d_x(p.x.rows(), p.x.cols());
  for (auto _ : state) {
    d_x.setZero();
    kernels::csr_mean_backward(p.csr, p.tr, p.d_out, d_x);
    benchmark::DoNotOptimize(d_x.data());
  }
  set_counters(state, p);
}

void BM_MeanBackwardSerial(benchmark::State& state) {
  auto& p = problem(state);
  Matrix<float> d_x(p.x.rows(), p.x.cols());
  for (auto _ : state) {
    d_x.setZero();
    kernels::serial::csr_mean_backward(p.csr, p.d_out, d_x);
    benchmark::DoNotOptimize(d_x.data());
  }
  set_counters(state, p);
}

void BM_WeightedSumParallel(benchmark::State& state) {
  auto& p = problem(state);
  Matrix<float> out;
  for (auto _ : state) {
    kernels::csr_weighted_sum(p.csr, p.w, p.x, out);
    benchmark::DoNotOptimize(out.data());
  }
  set_counters(state, p);
}

void BM_WeightedSumSerial(benchmark::State& state) {
  auto& p = problem(state);
  Matrix<float> out;
  for (auto _ : state) {
    kernels::serial::csr_weighted_sum(p.csr, p.w, p.x, out);
    benchmark::DoNotOptimize(out.data());
  }
  set_counters(state, p);
}

void BM_WeightedSumBackwardParallel(benchmark::State& state) {
  auto& p = problem(state);
  Vector<float> d_w;
  Matrix<float> d_x(p.x.rows(), p.x.cols());
  for (auto _ : state) {
    d_x.setZero();
    kernels::csr_weighted_sum_backward(p.csr, p.tr, p.w, p.x, p.d_out, d_w, d_x);
    benchmark::DoNotOptimize(d_x.data());
  }
  set_counters(state, p);
}

void BM_WeightedSumBackwardSerial(benchmark::State& state) {
  auto& p = problem(state);
  Vector<float> d_w;
  Matrix<float> d_x(p.x.rows(), p.x.cols());
  for (auto _ : state) {
    d_x.setZero();
    kernels::serial::csr_weighted_sum_backward(p.csr, p.w, p.x, p.d_out, d_w, d_x);
    benchmark::DoNotOptimize(d_x.data());
  }
  set_counters(state, p);
}

void BM_AttentionParallel(benchmark::State& state) {
  auto& p = problem(state);
  Matrix<float> out;
  Vector<float> alpha;
  for (auto _ : state) {
    kernels::csr_attention(p.csr, p.q, p.k, p.v, out, alpha);
    benchmark::DoNotOptimize(out.data());
  }
  set_counters(state, p);
}

void BM_AttentionSerial(benchmark::State& state) {
  auto& p = problem(state);
  Matrix<float> out;
  Vector<float> alpha;
  for (auto _ : state) {
    kernels::serial::csr_attention(p.csr, p.q, p.k, p.v, out, alpha);
    benchmark::DoNotOptimize(out.data());
  }
  set_counters(state, p);
}

void BM_AttentionBackwardParallel(benchmark::State& state) {
  auto& p = problem(state);
  Matrix<float> out;
  Vector<float> alpha;
  kernels::csr_attention(p.csr, p.q, p.k, p.v, out, alpha);
  Matrix<float> d_q(p.q.rows(), p.q.cols()), d_k(d_q.rows(), d_q.cols()), d_v(d_q.rows(), d_q.cols());
  for (auto _ : state) {
    d_q.setZero();
    d_k.setZero();
    d_v.setZero();
    kernels::csr_attention_backward(p.csr, p.tr, p.q, p.k, p.v, alpha, p.d_out, d_q, d_k, d_v);
    benchmark::DoNotOptimize(d_k.data());
  }
  set_counters(state, p);
}

void BM_AttentionBackwardSerial(benchmark::State& state) {
  auto& p = problem(state);
  Matrix<float> out;
  Vector<float> alpha;
  kernels::serial::csr_attention(p.csr, p.q, p.k, p.v, out, alpha);
  Matrix<float> d_q(p.q.rows(), p.q.cols()), d_k(d_q.rows(), d_q.cols()), d_v(d_q.rows(), d_q.cols());
  for (auto _ : state) {
    d_q.setZero();
    d_k.setZero();
    d_v.setZero();
    kernels::serial::csr_attention_backward(p.csr, p.q, p.k, p.v, alpha, p.d_out, d_q, d_k, d_v);
    benchmark::DoNotOptimize(d_k.data());
  }
  set_counters(state, p);
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({2000, 32})->Args({20000, 128})->Unit(benchmark::kMicrosecond);
}

BENCHMARK(BM_MeanParallel)->Apply(sizes);
BENCHMARK(BM_MeanSerial)->Apply(sizes);
BENCHMARK(BM_MeanBackwardParallel)->Apply(sizes);
BENCHMARK(BM_MeanBackwardSerial)->Apply(sizes);
BENCHMARK(BM_WeightedSumParallel)->Apply(sizes);
BENCHMARK(BM_WeightedSumSerial)->Apply(sizes);
BENCHMARK(BM_WeightedSumBackwardParallel)->Apply(sizes);
BENCHMARK(BM_WeightedSumBackwardSerial)->Apply(sizes);
BENCHMARK(BM_AttentionParallel)->Apply(sizes);
BENCHMARK(BM_AttentionSerial)->Apply(sizes);
BENCHMARK(BM_AttentionBackwardParallel)->Apply(sizes);
BENCHMARK(BM_AttentionBackwardSerial)->Apply(sizes);

}  // namespace
}  // namespace hyperprice

BENCHMARK_MAIN();
