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

#ifndef HDRR_FUSION_HPP_
#define HDRR_FUSION_HPP_

#include "hdrr/params.hpp"
#include "hdrr/tensor.hpp"

namespace hdrr {

// F_0: row t is [v_t | s]; [T x 2 d_s].
Tensor build_f0(const Tensor& video, const Tensor& sentence);

// F_m = ReLU(f_m(BiGRU_m(F_{m-1})) + F_{m-1}).
Tensor res_block(const Tensor& previous, const ResBlockParams& block);

// Chains every block in `params`, or applies ReLU(F_0 W + b) when the stack is
// replaced by a single fully-connected layer.
Tensor fuse(const Tensor& video, const Tensor& sentence, const FusionParams& params);

}  // namespace hdrr

#endif  // HDRR_FUSION_HPP_
