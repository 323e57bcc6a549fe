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

#include "hdrr/video_encoder.hpp"

#include <string>

#include "hdrr/error.hpp"
#include "hdrr/ops.hpp"
#include "hdrr/text_encoder.hpp"

namespace hdrr {

Tensor encode_video_global(const Tensor& features, const BiGruParams& gru, const Dense& fuse) {
  return encode_bigru_fused(features, gru, fuse);
}

Tensor project_semantic(const Tensor& global, const Dense& projection) {
  return relu(affine(global, projection));
}

VideoLevels encode_video(const Tensor& features, const ModelParams& params) {
  if (features.rank() != 2 || features.dim(1) != params.config.feature_dim) {
    throw DimensionError("encode_video: features " + shape_string(features.shape()) +
                         " do not have d_v = " + std::to_string(params.config.feature_dim) + " columns");
  }
  VideoLevels out;
  const Tensor global = encode_video_global(features, params.video_gru, params.video_fuse);
  out.sequences[0] = global;
  for (Level l : {Level::kAction, Level::kObject}) {
    const LevelParams& lp = params.level(l);
    if (lp.enabled) out.sequences[static_cast<std::size_t>(l)] = project_semantic(global, *lp.video_projection);
  }
  return out;
}

}  // namespace hdrr
