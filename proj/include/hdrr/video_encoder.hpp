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

#ifndef HDRR_VIDEO_ENCODER_HPP_
#define HDRR_VIDEO_ENCODER_HPP_

#include <array>

#include "hdrr/params.hpp"
#include "hdrr/tensor.hpp"

namespace hdrr {

struct VideoLevels {
  std::array<Tensor, 3> sequences;  // V^g, V^a, V^o, each [T x d_s]; undefined when disabled

  const Tensor& at(Level l) const { return sequences[static_cast<std::size_t>(l)]; }
};

// V^g: the same BiGRU + fusing layer architecture as the sentence encoder.
Tensor encode_video_global(const Tensor& features, const BiGruParams& gru, const Dense& fuse);

// Row-wise ReLU(v W + b).
Tensor project_semantic(const Tensor& global, const Dense& projection);

VideoLevels encode_video(const Tensor& features, const ModelParams& params);

}  // namespace hdrr

#endif  // HDRR_VIDEO_ENCODER_HPP_
