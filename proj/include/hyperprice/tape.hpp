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

// Define-by-run reverse-mode differentiation over dense row-major matrices.
//
// Every op evaluates eagerly and records a closure that maps the output gradient to input
// gradients. Csr structures and index lists passed to ops must outlive backward().

#include <cmath>
#include <deque>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

#include "hyperprice/common.hpp"
#include "hyperprice/kernels.hpp"

namespace hyperprice::ad {

template <typename T>
class Tape;

template <typename T>
struct Var {
  Tape<T>* tape = nullptr;
  int id = -1;

  const Matrix<T>& value() const { return tape->value(id); }
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  bool valid() const { return tape != nullptr; }
};

template <typename T>
class Tape {
 public:
  using Mat = Matrix<T>;
  using Backward = std::function<void(Tape&, const Mat&)>;

  Var<T> constant(Mat v) { return push(std::move(v), false, nullptr); }
  Var<T> variable(Mat v) { return push(std::move(v), true, nullptr); }

  const Mat& value(int id) const { return nodes_[id].value; }
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }

  /// Gradient of the last backward() output with respect to `v`; zeros if unreached.
  Mat grad(Var<T> v) const {
    const auto& n = nodes_[v.id];
    if (n.has_grad) return n.grad;
    return Mat::Zero(n.value.rows(), n.value.cols());
  }

  void accumulate(int id, const Mat& g) {
    auto& n = nodes_[id];
    if (!n.requires_grad) return;
    if (!n.has_grad) {
      n.grad = g;
      n.has_grad = true;
    } else {
      n.grad += g;
    }
  }

  /// Accumulates into the gradient buffer of `id` through a callback, allocating zeros first.
  template <typename F>
  void accumulate_with(int id, F&& f) {
    auto& n = nodes_[id];
    if (!n.requires_grad) return;
    if (!n.has_grad) {
      n.grad.setZero(n.value.rows(), n.value.cols());
      n.has_grad = true;
    }
    f(n.grad);
  }

  Var<T> record(Mat value, std::initializer_list<Var<T>> inputs, Backward fn) {
    bool needs = false;
    for (const auto& in : inputs) needs = needs || requires_grad(in.id);
    return push(std::move(value), needs, needs ? std::move(fn) : nullptr);
  }
  Var<T> record(Mat value, std::span<const Var<T>> inputs, Backward fn) {
    bool needs = false;
    for (const auto& in : inputs) needs = needs || requires_grad(in.id);
    return push(std::move(value), needs, needs ? std::move(fn) : nullptr);
  }

  /// Back-propagates from a 1x1 output.
  void backward(Var<T> out) {
    if (out.rows() != 1 || out.cols() != 1) throw Error("backward() needs a scalar output");
    for (auto& n : nodes_) {
      n.has_grad = false;
      n.grad.resize(0, 0);
    }
    accumulate(out.id, Mat::Constant(1, 1, T(1)));
    for (int id = out.id; id >= 0; --id) {
      auto& n = nodes_[id];
      if (n.has_grad && n.backward) n.backward(*this, n.grad);
    }
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Mat value;
    Mat grad;
    bool requires_grad = false;
    bool has_grad = false;
    Backward backward;
  };

  Var<T> push(Mat v, bool requires_grad, Backward fn) {
    nodes_.push_back(Node{std::move(v), Mat(), requires_grad, false, std::move(fn)});
    return Var<T>{this, static_cast<int>(nodes_.size()) - 1};
  }

  std::deque<Node> nodes_;  // deque keeps value references stable while recording
};

namespace detail {
template <typename T>
void check_same_shape(const Var<T>& a, const Var<T>& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                std::to_string(b.cols()));
  }
}
}  // namespace detail

template <typename T>
Var<T> operator+(Var<T> a, Var<T> b) {
  detail::check_same_shape(a, b, "add");
  return a.tape->record(a.value() + b.value(), {a, b}, [a, b](Tape<T>& t, const Matrix<T>& g) {
    t.accumulate(a.id, g);
    t.accumulate(b.id, g);
  });
}

template <typename T>
Var<T> operator-(Var<T> a, Var<T> b) {
  detail::check_same_shape(a, b, "sub");
  return a.tape->record(a.value() - b.value(), {a, b}, [a, b](Tape<T>& t, const Matrix<T>& g) {
    t.accumulate(a.id, g);
    t.accumulate(b.id, -g);
  });
}

template <typename T>
Var<T> hadamard(Var<T> a, Var<T> b) {
  detail::check_same_shape(a, b, "hadamard");
  return a.tape->record(a.value().cwiseProduct(b.value()), {a, b},
                        [a, b](Tape<T>& t, const Matrix<T>& g) {
                          t.accumulate(a.id, g.cwiseProduct(b.value()));
                          t.accumulate(b.id, g.cwiseProduct(a.value()));
                        });
}

template <typename T>
Var<T> scale(Var<T> a, T s) {
  return a.tape->record(a.value() * s, {a},
                        [a, s](Tape<T>& t, const Matrix<T>& g) { t.accumulate(a.id, g * s); });
}

/// a + bias, with a 1 x c bias broadcast over rows.
template <typename T>
Var<T> add_row(Var<T> a, Var<T> bias) {
  if (bias.rows() != 1 || bias.cols() != a.cols()) throw Error("add_row: bias shape mismatch");
  Matrix<T> out = a.value().rowwise() + bias.value().row(0);
  return a.tape->record(std::move(out), {a, bias}, [a, bias](Tape<T>& t, const Matrix<T>& g) {
    t.accumulate(a.id, g);
    t.accumulate(bias.id, g.colwise().sum());
  });
}

template <typename T>
Var<T> matmul(Var<T> a, Var<T> b) {
  if (a.cols() != b.rows()) throw Error("matmul: inner dimension mismatch");
  return a.tape->record(a.value() * b.value(), {a, b}, [a, b](Tape<T>& t, const Matrix<T>& g) {
    if (t.requires_grad(a.id)) t.accumulate(a.id, g * b.value().transpose());
    if (t.requires_grad(b.id)) t.accumulate(b.id, a.value().transpose() * g);
  });
}

/// a * b^T, the row form of applying a (out x in) weight matrix to every row of a.
template <typename T>
Var<T> matmul_nt(Var<T> a, Var<T> b) {
  if (a.cols() != b.cols()) throw Error("matmul_nt: inner dimension mismatch");
  return a.tape->record(a.value() * b.value().transpose(), {a, b},
                        [a, b](Tape<T>& t, const Matrix<T>& g) {
                          if (t.requires_grad(a.id)) t.accumulate(a.id, g * b.value());
                          if (t.requires_grad(b.id)) t.accumulate(b.id, g.transpose() * a.value());
                        });
}

template <typename T>
Var<T> tanh(Var<T> a) {
  const int self = static_cast<int>(a.tape->size());
  return a.tape->record(a.value().array().tanh().matrix(), {a},
                        [a, self](Tape<T>& t, const Matrix<T>& g) {
                          const auto& y = t.value(self);
                          t.accumulate(a.id, (g.array() * (T(1) - y.array().square())).matrix());
                        });
}

template <typename T>
Var<T> sigmoid(Var<T> a) {
  const int self = static_cast<int>(a.tape->size());
  return a.tape->record((T(1) / (T(1) + (-a.value().array()).exp())).matrix(), {a},
                        [a, self](Tape<T>& t, const Matrix<T>& g) {
                          const auto& y = t.value(self);
                          t.accumulate(a.id, (g.array() * y.array() * (T(1) - y.array())).matrix());
                        });
}

/// Column-wise concatenation [a | b | ...].
template <typename T>
Var<T> hcat(const std::vector<Var<T>>& parts) {
  if (parts.empty()) throw Error("hcat: no inputs");
  const auto rows = parts[0].rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw Error("hcat: row mismatch");
    cols += p.cols();
  }
  Matrix<T> out(rows, cols);
  Eigen::Index c = 0;
  for (const auto& p : parts) {
    out.middleCols(c, p.cols()) = p.value();
    c += p.cols();
  }
  return parts[0].tape->record(std::move(out), std::span<const Var<T>>(parts),
                               [parts](Tape<T>& t, const Matrix<T>& g) {
                                 Eigen::Index c = 0;
                                 for (const auto& p : parts) {
                                   if (t.requires_grad(p.id)) t.accumulate(p.id, g.middleCols(c, p.cols()));
                                   c += p.cols();
                                 }
                               });
}

/// Row-wise concatenation.
template <typename T>
Var<T> vcat(const std::vector<Var<T>>& parts) {
  if (parts.empty()) throw Error("vcat: no inputs");
  const auto cols = parts[0].cols();
  Eigen::Index rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw Error("vcat: column mismatch");
    rows += p.rows();
  }
  Matrix<T> out(rows, cols);
  Eigen::Index r = 0;
  for (const auto& p : parts) {
    out.middleRows(r, p.rows()) = p.value();
    r += p.rows();
  }
  return parts[0].tape->record(std::move(out), std::span<const Var<T>>(parts),
                               [parts](Tape<T>& t, const Matrix<T>& g) {
                                 Eigen::Index r = 0;
                                 for (const auto& p : parts) {
                                   if (t.requires_grad(p.id)) t.accumulate(p.id, g.middleRows(r, p.rows()));
                                   r += p.rows();
                                 }
                               });
}

template <typename T>
Var<T> col_slice(Var<T> a, Eigen::Index start, Eigen::Index width) {
  if (start < 0 || start + width > a.cols()) throw Error("col_slice: out of range");
  return a.tape->record(a.value().middleCols(start, width), {a},
                        [a, start, width](Tape<T>& t, const Matrix<T>& g) {
                          t.accumulate_with(a.id, [&](Matrix<T>& d) { d.middleCols(start, width) += g; });
                        });
}

/// out[r] = a[index[r]].
template <typename T>
Var<T> gather_rows(Var<T> a, std::vector<int> index) {
  Matrix<T> out(static_cast<Eigen::Index>(index.size()), a.cols());
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] < 0 || index[r] >= a.rows()) throw Error("gather_rows: index out of range");
    out.row(r) = a.value().row(index[r]);
  }
  auto idx = std::make_shared<const std::vector<int>>(std::move(index));
  return a.tape->record(std::move(out), {a}, [a, idx](Tape<T>& t, const Matrix<T>& g) {
    t.accumulate_with(a.id, [&](Matrix<T>& d) {
      for (std::size_t r = 0; r < idx->size(); ++r) d.row((*idx)[r]) += g.row(r);
    });
  });
}

/// out[:, c] = a[:, index[c]].
template <typename T>
Var<T> gather_cols(Var<T> a, std::vector<int> index) {
  Matrix<T> out(a.rows(), static_cast<Eigen::Index>(index.size()));
  for (std::size_t c = 0; c < index.size(); ++c) {
    if (index[c] < 0 || index[c] >= a.cols()) throw Error("gather_cols: index out of range");
    out.col(c) = a.value().col(index[c]);
  }
  auto idx = std::make_shared<const std::vector<int>>(std::move(index));
  return a.tape->record(std::move(out), {a}, [a, idx](Tape<T>& t, const Matrix<T>& g) {
    t.accumulate_with(a.id, [&](Matrix<T>& d) {
      for (std::size_t c = 0; c < idx->size(); ++c) d.col((*idx)[c]) += g.col(c);
    });
  });
}

template <typename T>
Var<T> sum(Var<T> a) {
  return a.tape->record(Matrix<T>::Constant(1, 1, a.value().sum()), {a},
                        [a](Tape<T>& t, const Matrix<T>& g) {
                          t.accumulate(a.id, Matrix<T>::Constant(a.rows(), a.cols(), g(0, 0)));
                        });
}

/// Row i of the result is the mean of rows csr.row(i) of x (zero when empty).
template <typename T>
Var<T> csr_mean(const Csr& csr, Var<T> x) {
  Matrix<T> out;
  kernels::csr_mean(csr, x.value(), out);
  const Csr* c = &csr;
  return x.tape->record(std::move(out), {x}, [c, x](Tape<T>& t, const Matrix<T>& g) {
    CsrTranspose tr(*c, static_cast<int>(x.rows()));
    t.accumulate_with(x.id, [&](Matrix<T>& d) { kernels::csr_mean_backward(*c, tr, g, d); });
  });
}

/// Row i of the result is sum over edges e of row i of w[e] * x[csr.indices[e]]; w is nnz x 1.
template <typename T>
Var<T> csr_weighted_sum(const Csr& csr, Var<T> w, Var<T> x) {
  if (w.rows() != csr.nnz() || w.cols() != 1) throw Error("csr_weighted_sum: weight shape");
  Matrix<T> out;
  const Vector<T> wv = w.value().col(0);
  kernels::csr_weighted_sum(csr, wv, x.value(), out);
  const Csr* c = &csr;
  return x.tape->record(std::move(out), {w, x}, [c, w, x](Tape<T>& t, const Matrix<T>& g) {
    CsrTranspose tr(*c, static_cast<int>(x.rows()));
    const Vector<T> wv = w.value().col(0);
    Vector<T> dw;
    Matrix<T> dx = Matrix<T>::Zero(x.rows(), x.cols());
    kernels::csr_weighted_sum_backward(*c, tr, wv, x.value(), g, dw, dx);
    t.accumulate(w.id, Matrix<T>(dw));
    t.accumulate(x.id, dx);
  });
}

/// Per-row softmax attention of q[i] over keys k[j], j in csr.row(i), mixing values v[j].
template <typename T>
Var<T> csr_attention(const Csr& csr, Var<T> q, Var<T> k, Var<T> v) {
  if (q.rows() != csr.rows() || q.cols() != k.cols() || k.rows() != v.rows()) {
    throw Error("csr_attention: shape mismatch");
  }
  Matrix<T> out;
  auto alpha = std::make_shared<Vector<T>>();
  kernels::csr_attention(csr, q.value(), k.value(), v.value(), out, *alpha);
  const Csr* c = &csr;
  return q.tape->record(std::move(out), {q, k, v}, [c, q, k, v, alpha](Tape<T>& t, const Matrix<T>& g) {
    CsrTranspose tr(*c, static_cast<int>(k.rows()));
    Matrix<T> dq = Matrix<T>::Zero(q.rows(), q.cols());
    Matrix<T> dk = Matrix<T>::Zero(k.rows(), k.cols());
    Matrix<T> dv = Matrix<T>::Zero(v.rows(), v.cols());
    kernels::csr_attention_backward(*c, tr, q.value(), k.value(), v.value(), *alpha, g, dq, dk, dv);
    t.accumulate(q.id, dq);
    t.accumulate(k.id, dk);
    t.accumulate(v.id, dv);
  });
}

/// Numerically stable row-wise softmax.
template <typename T>
Matrix<T> softmax_rows(const Matrix<T>& logits) {
  Matrix<T> p(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const T m = logits.row(r).maxCoeff();
    p.row(r) = (logits.row(r).array() - m).exp().matrix();
    p.row(r) /= p.row(r).sum();
  }
  return p;
}

inline constexpr double kProbabilityFloor = 1e-12;

/// Mean over rows of -log softmax(logits)[row, target[row]].
/// Per-row losses are capped at -log(1e-12); `clamped` counts capped rows. The gradient is
/// the smooth softmax-minus-onehot gradient in every case.
template <typename T>
Var<T> softmax_cross_entropy(Var<T> logits, std::vector<int> targets, int* clamped = nullptr) {
  if (static_cast<Eigen::Index>(targets.size()) != logits.rows()) {
    throw Error("softmax_cross_entropy: one target per row required");
  }
  const auto& z = logits.value();
  auto probs = std::make_shared<Matrix<T>>(softmax_rows<T>(z));
  const double cap = -std::log(kProbabilityFloor);
  double total = 0.0;
  int n_clamped = 0;
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const int y = targets[r];
    if (y < 0 || y >= z.cols()) throw Error("softmax_cross_entropy: target out of range");
    const T m = z.row(r).maxCoeff();
    const double lse = static_cast<double>(m) +
                       std::log(static_cast<double>((z.row(r).array() - m).exp().sum()));
    double loss = lse - static_cast<double>(z(r, y));
    if (loss > cap) {
      loss = cap;
      ++n_clamped;
    }
    total += loss;
  }
  if (clamped) *clamped += n_clamped;
  const T mean = static_cast<T>(total / static_cast<double>(z.rows()));
  auto tg = std::make_shared<const std::vector<int>>(std::move(targets));
  return logits.tape->record(Matrix<T>::Constant(1, 1, mean), {logits},
                             [logits, probs, tg](Tape<T>& t, const Matrix<T>& g) {
                               Matrix<T> d = *probs;
                               for (std::size_t r = 0; r < tg->size(); ++r) d(r, (*tg)[r]) -= T(1);
                               d *= g(0, 0) / static_cast<T>(tg->size());
                               t.accumulate(logits.id, d);
                             });
}

}  // namespace hyperprice::ad
