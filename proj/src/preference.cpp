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

#include <algorithm>
#include <string>

namespace hyperprice {

void SessionBatch::add(const std::vector<int>& prefix, int target, const std::vector<int>& item_levels,
                       int max_len) {
  const int m = static_cast<int>(prefix.size());
  if (m == 0) throw Error("empty session prefix");
  if (m > max_len) {
    throw Error("session prefix of length " + std::to_string(m) + " exceeds the position table (" +
                std::to_string(max_len) + ")");
  }
  const int n = static_cast<int>(item_levels.size());
  const int s = size();
  for (int j = 0; j < m; ++j) {
    const int item = prefix[j];
    if (item < 0 || item >= n) throw Error("item index " + std::to_string(item) + " out of range");
    items.push_back(item);
    price_nodes.push_back(item_levels[item]);
    positions.push_back(m - 1 - j);
    row_session.push_back(s);
  }
  if (target >= n) throw Error("target index " + std::to_string(target) + " out of range");
  last.push_back(rows() + m - 1);
  offsets.push_back(rows() + m);
  targets.push_back(target);
  target_levels.push_back(target >= 0 ? item_levels[target] : -1);
}

void SessionBatch::finalize() { sessions = Csr::contiguous(offsets); }

double joint_loss(std::span<const double> interest_dist, int target_item,
                  std::span<const double> price_dist, int target_level, int* clamped) {
  auto term = [&](std::span<const double> dist, int target) {
    if (target < 0 || target >= static_cast<int>(dist.size())) throw Error("joint_loss: target out of range");
    double p = dist[target];
    if (p < ad::kProbabilityFloor) {
      p = ad::kProbabilityFloor;
      if (clamped) ++*clamped;
    }
    return -std::log(p);
  };
  return term(interest_dist, target_item) + term(price_dist, target_level);
}

}  // namespace hyperprice
