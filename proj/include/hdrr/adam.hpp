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

#ifndef HDRR_ADAM_HPP_
#define HDRR_ADAM_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "hdrr/gradcheck.hpp"

namespace hdrr {

struct AdamState {
  double learning_rate = 0.003;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t step = 0;
  std::vector<std::vector<double>> first_moment;   // one buffer per parameter
  std::vector<std::vector<double>> second_moment;

  AdamState() = default;
  AdamState(std::span<const NamedTensor> params, double lr);
};

// One bias-corrected Adam update. grads[i] is the gradient for params[i];
// an empty entry counts as zero. TrainingError names the first parameter with
// a non-finite gradient; nothing is updated in that case.
void adam_step(std::span<NamedTensor> params, std::span<const std::vector<double>> grads, AdamState& state);

}  // namespace hdrr

#endif  // HDRR_ADAM_HPP_
