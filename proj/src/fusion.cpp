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

#include "hdrr/fusion.hpp"

#include <array>
#include <string>

#include "hdrr/error.hpp"
#include "hdrr/gru.hpp"
#include "hdrr/ops.hpp"

namespace hdrr {

Tensor build_f0(const Tensor& video, const Tensor& sentence) {
  if (video.rank() != 2 || sentence.rank() != 1 || video.dim(1) != sentence.size()) {
    throw DimensionError("build_f0: video " + shape_string(video.shape()) + " and sentence " +
                         shape_string(sentence.shape()) + " disagree on d_s");
  }
  const std::array<Tensor, 2> parts = {video, repeat_rows(sentence, video.dim(0))};
  return concat_last_dim(parts);
}

Tensor res_block(const Tensor& previous, const ResBlockParams& block) {
  const std::size_t df = previous.dim(1);
  if (df % 2 != 0) throw ConfigError("res_block: d_f must be even, got " + std::to_string(df));
  const Tensor hidden = affine(bigru(previous, block.gru), block.out);
  return relu(add(hidden, previous));
}

Tensor fuse(const Tensor& video, const Tensor& sentence, const FusionParams& params) {
  Tensor f = build_f0(video, sentence);
  if (params.flat) return relu(affine(f, *params.flat));
  if (params.blocks.empty()) throw ConfigError("fuse: the Res-BiGRU stack needs depth M >= 1");
  for (const ResBlockParams& block : params.blocks) f = res_block(f, block);
  return f;
}

}  // namespace hdrr
