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

#ifndef HDRR_LOSSES_HPP_
#define HDRR_LOSSES_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "hdrr/localizer.hpp"
#include "hdrr/model.hpp"
#include "hdrr/tensor.hpp"

namespace hdrr {

inline constexpr double kScoreClamp = 1e-7;

struct LossBreakdown {
  double alignment = 0.0;
  double regression = 0.0;
  double total = 0.0;  // alignment + alpha * regression
  std::size_t best_candidate = 0;
};

// IoU of each candidate span (in seconds, end-exclusive unit mapping) with the
// annotated moment.
std::vector<double> iou_targets(const std::vector<Candidate>& candidates, const Interval& moment,
                                double duration, std::size_t units);

// argmax with ties broken toward the smallest index.
std::size_t best_candidate(std::span<const double> targets);

// Ground truth in the unit coordinates of the offsets: the inverse of
// units_to_seconds.
UnitSpan moment_to_units(const Interval& moment, double duration, std::size_t units);

// Soft-target BCE of the fused scores; ConfigError when there are no
// candidates.
Tensor alignment_loss(const Tensor& scores, std::span<const double> iou);

// smooth_l1(truth.start - start) + smooth_l1(truth.end - end); start/end are
// scalar tensors.
Tensor regression_loss(const Tensor& refined_start, const Tensor& refined_end, const UnitSpan& truth);

Tensor total_loss(const Tensor& alignment, const Tensor& regression, double alpha);

struct SampleLoss {
  Tensor total;
  LossBreakdown breakdown;
};

// Both terms for one sample. The regression term uses the unclamped
// t + d of the best unrefined candidate.
SampleLoss sample_loss(const ModelOutput& output, const std::vector<Candidate>& candidates, const Sample& sample,
                       std::size_t units, double alpha);

}  // namespace hdrr

#endif  // HDRR_LOSSES_HPP_
