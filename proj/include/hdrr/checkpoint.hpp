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

#ifndef HDRR_CHECKPOINT_HPP_
#define HDRR_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hdrr/params.hpp"

namespace hdrr {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout, all little-endian:
//   "HDRR" | u32 version | u32 entry count
//   per entry: u32 name length | name bytes | u32 rank | rank x u32 dims |
//              prod(dims) x f64 values
struct CheckpointEntry {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

std::string encode_checkpoint(const std::vector<NamedTensor>& registry);
std::vector<CheckpointEntry> decode_checkpoint(const std::string& bytes);

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
// Builds the architecture from `config` and fills it from the file. Names and
// shapes must match exactly.
ModelParams load_checkpoint(const std::filesystem::path& path, const RunConfig& config);

}  // namespace hdrr

#endif  // HDRR_CHECKPOINT_HPP_
