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

#include "hyperprice/pipeline.hpp"

namespace hyperprice {

PreprocessResult preprocess(const std::vector<Event>& events, const PreprocessConfig& config) {
  SessionSet sessions = build_sessions(events, config.max_len);
  if (sessions.sessions.empty()) throw Error("no session with at least two items");
  if (config.min_count > 0) {
    sessions = apply_core_filter(sessions, config.min_count, level_assigner(config.rho, config.method));
  }
  PreprocessResult result;
  result.scheme = fit_level_scheme(sessions.catalog, config.rho, config.method);
  const auto levels = assign_levels(sessions.catalog, result.scheme);
  for (int i = 0; i < sessions.catalog.size(); ++i) sessions.catalog.items[i].price_level = levels[i];
  sessions.catalog.levels = config.rho;

  result.data.catalog = sessions.catalog;
  result.data.splits = chronological_split(sessions, config.ratios);
  return result;
}

}  // namespace hyperprice
