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

// Binary checkpoint container (little-endian host layout):
//   magic "HPRCKPT\0", u32 version, u64 n + JSON config text, i64 Adam step,
//   u32 array count, then per array: u32 n + name, u32 rows, u32 cols and three float
//   blocks (value, first moment, second moment), and a closing magic "HPRCEND\0".

#include <map>
#include <string>

#include "hyperprice/model.hpp"
#include "hyperprice/params.hpp"

namespace hyperprice {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelConfig config;
  std::map<std::string, std::string> metadata;  // free-form run information
  ParameterStore<float> params;
};

std::string config_to_json(const ModelConfig& config, const std::map<std::string, std::string>& metadata = {});
ModelConfig config_from_json(const std::string& text, std::map<std::string, std::string>* metadata = nullptr);

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
/// Reads the whole file before building any state; throws on a missing file
/// ("checkpoint not found"), bad magic, version mismatch or truncation.
Checkpoint load_checkpoint(const std::string& path);

/// Verifies that every array matches the parameter layout of `model`; the error names the
/// first offending array.
void check_compatible(const ParameterStore<float>& params, const Model<float>& model);

}  // namespace hyperprice
