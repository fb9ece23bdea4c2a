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

// Finite-difference check of the full training objective on a tiny random problem.

#include <cstdint>
#include <string>

#include "hyperprice/params.hpp"

namespace hyperprice {

struct TinyCheckConfig {
  std::string variant = "full";
  std::uint64_t seed = 1;
  int dim = 4;
  int heads = 2;
  int layers = 2;
  double step = 1e-5;
  double abs_floor = 1e-9;  // central-difference noise at this step is ~1e-10
};

/// Three items over two categories, two brands and three price levels, one three-item
/// session; parameters drawn from U(-1, 1) in 64-bit.
GradCheckReport tiny_model_gradcheck(const TinyCheckConfig& config);

}  // namespace hyperprice
