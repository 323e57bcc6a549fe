// Copyright 2026 The HDRR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HDRR_SYNTH_HPP_
#define HDRR_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hdrr/config.hpp"
#include "hdrr/dataset.hpp"

namespace hdrr {

// A self-contained grounding task. Each video carries a planted pattern for
// the queried (action, object) pair inside the ground-truth units and, when
// room allows, a distractor pattern for a disjoint pair elsewhere. Everything
// else is seeded noise.
struct SyntheticDataset {
  std::vector<DatasetRecord> records;  // feature_path relative, e.g. "features/synth_0000.vfea"
  std::vector<FeatureMatrix> features;
};

// Desk-scale settings for the synthetic task: T=75, d_v=d_w=d_s=16, M=3,
// filter sizes {6, 12, 24}, and a small batch so a few dozen records still
// give many optimizer steps per epoch.
RunConfig synthetic_config();

// Pure function of (seed, n_records, units, feature_dim, max_query_len).
SyntheticDataset generate_synthetic(std::uint64_t seed, std::size_t n_records, const RunConfig& config);

// Writes <dir>/manifest.jsonl and <dir>/features/*.vfea.
void write_synthetic(const SyntheticDataset& dataset, const std::filesystem::path& dir);

// The verbs and nouns that have planted patterns.
const std::vector<std::string>& synthetic_actions();
const std::vector<std::string>& synthetic_objects();

}  // namespace hdrr

#endif  // HDRR_SYNTH_HPP_
