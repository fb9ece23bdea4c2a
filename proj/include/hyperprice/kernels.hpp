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

// Sparse aggregation kernels over CSR neighbor lists.
//
// The kernels in `kernels::` parallelize over output rows with OpenMP. Every output row is
// produced by exactly one thread in a fixed summation order, so results do not depend on
// the thread count. Backward passes gather through a CsrTranspose instead of scattering.
//
// `kernels::serial::` holds straightforward single-threaded versions that scatter directly;
// tests and the benchmark compare the two.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperprice/csr.hpp"

namespace hyperprice {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

namespace kernels {

/// out[i] = mean of X[j] over j in row i; zero for empty rows.
template <typename T>
void csr_mean(const Csr& csr, const Matrix<T>& X, Matrix<T>& out) {
  out.setZero(csr.rows(), X.cols());
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < csr.rows(); ++i) {
    const int deg = csr.degree(i);
    if (deg == 0) continue;
    for (int j : csr.row(i)) out.row(i) += X.row(j);
    out.row(i) /= static_cast<T>(deg);
  }
}

template <typename T>
void csr_mean_backward(const Csr& csr, const CsrTranspose& tr, const Matrix<T>& d_out,
                       Matrix<T>& d_x) {
#pragma omp parallel for schedule(dynamic, 64)
  for (int k = 0; k < tr.cols(); ++k) {
    for (int p = tr.offsets[k]; p < tr.offsets[k + 1]; ++p) {
      const int i = tr.edge_row[tr.edges[p]];
      d_x.row(k) += d_out.row(i) / static_cast<T>(csr.degree(i));
    }
  }
}

/// out[i] = sum over edges e=(i,j) of w[e] * X[j].
template <typename T>
void csr_weighted_sum(const Csr& csr, const Vector<T>& w, const Matrix<T>& X, Matrix<T>& out) {
  out.setZero(csr.rows(), X.cols());
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < csr.rows(); ++i) {
    for (int e = csr.offsets[i]; e < csr.offsets[i + 1]; ++e) {
      out.row(i) += w[e] * X.row(csr.indices[e]);
    }
  }
}

template <typename T>
void csr_weighted_sum_backward(const Csr& csr, const CsrTranspose& tr, const Vector<T>& w,
                               const Matrix<T>& X, const Matrix<T>& d_out, Vector<T>& d_w,
                               Matrix<T>& d_x) {
  d_w.resize(csr.nnz());
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < csr.rows(); ++i) {
    for (int e = csr.offsets[i]; e < csr.offsets[i + 1]; ++e) {
      d_w[e] = d_out.row(i).dot(X.row(csr.indices[e]));
    }
  }
#pragma omp parallel for schedule(dynamic, 64)
  for (int k = 0; k < tr.cols(); ++k) {
    for (int p = tr.offsets[k]; p < tr.offsets[k + 1]; ++p) {
      const int e = tr.edges[p];
      d_x.row(k) += w[e] * d_out.row(tr.edge_row[e]);
    }
  }
}

/// Unscaled dot-product attention per CSR row:
///   alpha[e] = softmax over row i of Q[i] . K[j],  out[i] = sum alpha[e] V[j].
/// Rows without edges produce zeros.
template <typename T>
void csr_attention(const Csr& csr, const Matrix<T>& Q, const Matrix<T>& K, const Matrix<T>& V,
                   Matrix<T>& out, Vector<T>& alpha) {
  out.setZero(csr.rows(), V.cols());
  alpha.resize(csr.nnz());
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < csr.rows(); ++i) {
    const int begin = csr.offsets[i], end = csr.offsets[i + 1];
    if (begin == end) continue;
    T max_score = -std::numeric_limits<T>::infinity();
    for (int e = begin; e < end; ++e) {
      alpha[e] = Q.row(i).dot(K.row(csr.indices[e]));
      max_score = std::max(max_score, alpha[e]);
    }
    T total = 0;
    for (int e = begin; e < end; ++e) {
      alpha[e] = std::exp(alpha[e] - max_score);
      total += alpha[e];
    }
    for (int e = begin; e < end; ++e) {
      alpha[e] /= total;
      out.row(i) += alpha[e] * V.row(csr.indices[e]);
    }
  }
}

template <typename T>
void csr_attention_backward(const Csr& csr, const CsrTranspose& tr, const Matrix<T>& Q,
                            const Matrix<T>& K, const Matrix<T>& V, const Vector<T>& alpha,
                            const Matrix<T>& d_out, Matrix<T>& d_q, Matrix<T>& d_k,
                            Matrix<T>& d_v) {
  Vector<T> d_score(csr.nnz());
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < csr.rows(); ++i) {
    const int begin = csr.offsets[i], end = csr.offsets[i + 1];
    T weighted = 0;
    for (int e = begin; e < end; ++e) {
      d_score[e] = d_out.row(i).dot(V.row(csr.indices[e]));  // d alpha
      weighted += alpha[e] * d_score[e];
    }
    for (int e = begin; e < end; ++e) {
      d_score[e] = alpha[e] * (d_score[e] - weighted);
      d_q.row(i) += d_score[e] * K.row(csr.indices[e]);
    }
  }
#pragma omp parallel for schedule(dynamic, 64)
  for (int k = 0; k < tr.cols(); ++k) {
    for (int p = tr.offsets[k]; p < tr.offsets[k + 1]; ++p) {
      const int e = tr.edges[p];
      const int i = tr.edge_row[e];
      d_k.row(k) += d_score[e] * Q.row(i);
      d_v.row(k) += alpha[e] * d_out.row(i);
    }
  }
}

namespace serial {

template <typename T>
void csr_mean(const Csr& csr, const Matrix<T>& X, Matrix<T>& out) {
  out.setZero(csr.rows(), X.cols());
  for (int i = 0; i < csr.rows(); ++i) {
    const int deg = csr.degree(i);
    for (int j : csr.row(i))
      for (int c = 0; c < X.cols(); ++c) out(i, c) += X(j, c) / static_cast<T>(deg);
  }
}

template <typename T>
void csr_mean_backward(const Csr& csr, const Matrix<T>& d_out, Matrix<T>& d_x) {
  for (int i = 0; i < csr.rows(); ++i)
    for (int j : csr.row(i))
      for (int c = 0; c < d_out.cols(); ++c) d_x(j, c) += d_out(i, c) / static_cast<T>(csr.degree(i));
}

template <typename T>
void csr_weighted_sum(const Csr& csr, const Vector<T>& w, const Matrix<T>& X, Matrix<T>& out) {
  out.setZero(csr.rows(), X.cols());
  for (int i = 0; i < csr.rows(); ++i)
    for (int e = csr.offsets[i]; e < csr.offsets[i + 1]; ++e)
      for (int c = 0; c < X.cols(); ++c) out(i, c) += w[e] * X(csr.indices[e], c);
}

template <typename T>
void csr_weighted_sum_backward(const Csr& csr, const Vector<T>& w, const Matrix<T>& X,
                               const Matrix<T>& d_out, Vector<T>& d_w, Matrix<T>& d_x) {
  d_w.setZero(csr.nnz());
  for (int i = 0; i < csr.rows(); ++i) {
    for (int e = csr.offsets[i]; e < csr.offsets[i + 1]; ++e) {
      const int j = csr.indices[e];
      for (int c = 0; c < X.cols(); ++c) {
        d_w[e] += d_out(i, c) * X(j, c);
        d_x(j, c) += w[e] * d_out(i, c);
      }
    }
  }
}

template <typename T>
void csr_attention(const Csr& csr, const Matrix<T>& Q, const Matrix<T>& K, const Matrix<T>& V,
                   Matrix<T>& out, Vector<T>& alpha) {
  out.setZero(csr.rows(), V.cols());
  alpha.setZero(csr.nnz());
  for (int i = 0; i < csr.rows(); ++i) {
    const int begin = csr.offsets[i], end = csr.offsets[i + 1];
    if (begin == end) continue;
    std::vector<T> score(end - begin);
    for (int e = begin; e < end; ++e)
      for (int c = 0; c < Q.cols(); ++c) score[e - begin] += Q(i, c) * K(csr.indices[e], c);
    const T max_score = *std::max_element(score.begin(), score.end());
    T total = 0;
    for (auto& s : score) total += (s = std::exp(s - max_score));
    for (int e = begin; e < end; ++e) {
      alpha[e] = score[e - begin] / total;
      for (int c = 0; c < V.cols(); ++c) out(i, c) += alpha[e] * V(csr.indices[e], c);
    }
  }
}

template <typename T>
void csr_attention_backward(const Csr& csr, const Matrix<T>& Q, const Matrix<T>& K,
                            const Matrix<T>& V, const Vector<T>& alpha, const Matrix<T>& d_out,
                            Matrix<T>& d_q, Matrix<T>& d_k, Matrix<T>& d_v) {
  for (int i = 0; i < csr.rows(); ++i) {
    const int begin = csr.offsets[i], end = csr.offsets[i + 1];
    std::vector<T> d_alpha(end - begin, T(0));
    T weighted = 0;
    for (int e = begin; e < end; ++e) {
      const int j = csr.indices[e];
      for (int c = 0; c < V.cols(); ++c) {
        d_alpha[e - begin] += d_out(i, c) * V(j, c);
        d_v(j, c) += alpha[e] * d_out(i, c);
      }
      weighted += alpha[e] * d_alpha[e - begin];
    }
    for (int e = begin; e < end; ++e) {
      const int j = csr.indices[e];
      const T ds = alpha[e] * (d_alpha[e - begin] - weighted);
      for (int c = 0; c < Q.cols(); ++c) {
        d_q(i, c) += ds * K(j, c);
        d_k(j, c) += ds * Q(i, c);
      }
    }
  }
}

}  // namespace serial
}  // namespace kernels
}  // namespace hyperprice
