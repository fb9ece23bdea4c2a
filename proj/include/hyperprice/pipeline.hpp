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

#include <array>
#include <vector>

#include "hyperprice/dataset.hpp"
#include "hyperprice/price_levels.hpp"

namespace hyperprice {

struct PreprocessConfig {
  int rho = 5;
  LevelMethod method = LevelMethod::kLogistic;
  int min_count = 10;  // 0 disables the core filter
  int max_len = 19;
  std::array<double, 3> ratios{0.7, 0.2, 0.1};
};

struct PreprocessResult {
  SplitDataset data;
  LevelScheme scheme;  // fitted on the filtered catalog
};

/// Sessions, core filter (with level counts), level assignment and chronological split.
PreprocessResult preprocess(const std::vector<Event>& events, const PreprocessConfig& config);

}  // namespace hyperprice
