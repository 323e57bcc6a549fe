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

#ifndef HDRR_PARAMS_HPP_
#define HDRR_PARAMS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hdrr/config.hpp"
#include "hdrr/gradcheck.hpp"
#include "hdrr/gru.hpp"
#include "hdrr/tensor.hpp"

namespace hdrr {

enum class Level : std::size_t { kGlobal = 0, kAction = 1, kObject = 2 };

inline constexpr std::array<Level, 3> kAllLevels = {Level::kGlobal, Level::kAction, Level::kObject};

const char* level_name(Level level);
bool level_enabled(Level level, const AblationFlags& flags);
std::vector<Level> active_levels(const AblationFlags& flags);

// Fully-connected layer y = x W + b with W [in x out].
struct Dense {
  Tensor weight;
  Tensor bias;
};

Tensor affine(const Tensor& x, const Dense& layer);

// Multi-head self-attention pooling. Head i owns columns
// [i d_h, (i + 1) d_h) of the packed query/key/value projections.
struct AttentionParams {
  Tensor query;  // [d_s x d_s]
  Tensor key;    // [d_s x d_s]
  Tensor value;  // [d_s x d_s]
  Tensor pool;   // [1 x L_max]
};

struct ResBlockParams {
  BiGruParams gru;  // hidden d_f / 2 per direction
  Dense out;        // d_f -> d_f
};

// Either `blocks` (Res-BiGRU stack) or `flat` (single affine map) is used.
struct FusionParams {
  std::vector<ResBlockParams> blocks;
  std::optional<Dense> flat;
};

// One convolution per filter size: kernel [w x d_f x 1], bias [1].
struct ConvHeadParams {
  std::vector<Tensor> kernels;
  std::vector<Tensor> biases;
};

struct LevelParams {
  bool enabled = false;
  std::optional<AttentionParams> attention;
  std::optional<Dense> video_projection;  // action and object levels only
  FusionParams fusion;
  ConvHeadParams rank;
};

// Every learnable tensor of the model, also listed in `registry` in a fixed
// order. Each tensor is initialised uniform(-1/sqrt(fan_in), 1/sqrt(fan_in))
// from a stream derived from (seed, name), so toggling one component leaves
// the initial values of the others unchanged.
struct ModelParams {
  RunConfig config;
  BiGruParams text_gru;
  Dense text_fuse;
  BiGruParams video_gru;
  Dense video_fuse;
  std::array<LevelParams, 3> levels;
  Dense score_fuse;  // [n_levels x 1]
  ConvHeadParams offset_start;
  ConvHeadParams offset_end;
  std::vector<NamedTensor> registry;

  static ModelParams create(const RunConfig& config, std::uint64_t seed);

  const LevelParams& level(Level l) const { return levels[static_cast<std::size_t>(l)]; }
  // Same architecture with copied values and no gradients.
  ModelParams clone() const;
  std::size_t parameter_count() const;
  void zero_grad();
};

}  // namespace hdrr

#endif  // HDRR_PARAMS_HPP_
