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

#ifndef HDRR_CONFIG_HPP_
#define HDRR_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hdrr {

struct AblationFlags {
  bool use_action = true;
  bool use_object = true;
  bool use_res_bigru = true;
  bool use_self_attention = true;
};

// Every hyperparameter of a run. Defaults follow the Charades-STA setting
// except for the representation sizes, which are desk-scale.
struct RunConfig {
  std::size_t max_query_len = 10;  // L_max
  std::size_t units = 75;          // T
  std::size_t word_dim = 300;      // d_w
  std::size_t feature_dim = 1024;  // d_v
  std::size_t hidden_dim = 64;     // d_s
  std::size_t fused_dim = 128;     // d_f, always 2 d_s
  std::size_t depth = 3;           // M
  std::vector<std::size_t> filter_sizes = {6, 12, 24, 48, 72};
  std::size_t heads = 4;
  double learning_rate = 0.003;
  std::size_t batch_size = 128;
  std::size_t epochs = 50;
  double alpha = 0.001;
  std::uint64_t seed = 1;
  AblationFlags ablation;
  std::vector<double> iou_thresholds = {0.3, 0.5, 0.7};
  std::string embedding_path;  // empty: hash-generated vectors
  std::uint64_t embedding_seed = 0;

  // Throws ConfigError naming the violated constraint.
  void validate() const;
};

// ActivityNet-Captions sizes: L_max 50, T 200, lr 3e-4, seven filter sizes.
RunConfig activitynet_defaults();

nlohmann::json to_json(const RunConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

}  // namespace hdrr

#endif  // HDRR_CONFIG_HPP_
