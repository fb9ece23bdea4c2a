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

namespace hyperprice {

/// Compressed sparse rows: row i owns indices[offsets[i] .. offsets[i+1]).
struct Csr {
  std::vector<int> offsets{0};
  std::vector<int> indices;

  int rows() const { return static_cast<int>(offsets.size()) - 1; }
  int nnz() const { return static_cast<int>(indices.size()); }
  int degree(int row) const { return offsets[row + 1] - offsets[row]; }
  std::span<const int> row(int r) const {
    return {indices.data() + offsets[r], static_cast<std::size_t>(degree(r))};
  }

  static Csr from_lists(const std::vector<std::vector<int>>& lists) {
    Csr c;
    c.offsets.reserve(lists.size() + 1);
    for (const auto& l : lists) {
      c.indices.insert(c.indices.end(), l.begin(), l.end());
      c.offsets.push_back(static_cast<int>(c.indices.size()));
    }
    return c;
  }

  /// One row per session with consecutive positions, from session offsets.
  static Csr contiguous(std::vector<int> offsets) {
    Csr c;
    c.offsets = std::move(offsets);
    c.indices.resize(c.offsets.back());
    for (int i = 0; i < c.nnz(); ++i) c.indices[i] = i;
    return c;
  }
};

/// Reverse view of a Csr: for each column, the edge ids (positions in `indices`) that hit it.
struct CsrTranspose {
  std::vector<int> offsets;
  std::vector<int> edges;
  std::vector<int> edge_row;  // row that owns each edge

  CsrTranspose() = default;
  CsrTranspose(const Csr& csr, int n_cols) : offsets(n_cols + 1, 0), edges(csr.nnz()), edge_row(csr.nnz()) {
    for (int r = 0; r < csr.rows(); ++r)
      for (int e = csr.offsets[r]; e < csr.offsets[r + 1]; ++e) edge_row[e] = r;
    for (int col : csr.indices) ++offsets[col + 1];
    for (int c = 0; c < n_cols; ++c) offsets[c + 1] += offsets[c];
    std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
    for (int e = 0; e < csr.nnz(); ++e) edges[cursor[csr.indices[e]]++] = e;
  }

  int cols() const { return static_cast<int>(offsets.size()) - 1; }
};

}  // namespace hyperprice
