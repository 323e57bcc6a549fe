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

#ifndef HDRR_LOCALIZER_HPP_
#define HDRR_LOCALIZER_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hdrr/dataset.hpp"
#include "hdrr/params.hpp"
#include "hdrr/tensor.hpp"

namespace hdrr {

// Inclusive unit span produced by one window of one filter size.
struct Candidate {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t scale = 0;  // index into the retained filter sizes
  std::size_t width = 0;
};

// Scales in the given order, positions ascending within a scale. Filter sizes
// larger than `units` are dropped with a warning on stderr; ConfigError when
// nothing remains.
std::vector<Candidate> enumerate_candidates(std::size_t units, const std::vector<std::size_t>& filter_sizes);

// Raw per-candidate convolution outputs [K], aligned with the enumeration.
Tensor conv_head_outputs(const Tensor& fused, const ConvHeadParams& head);

// sigmoid(Rank^x(F_hat^x)) -> [K].
Tensor rank_level(const Tensor& fused, const ConvHeadParams& head);

// sigmoid(f_h(r^g | r^a | r^o)) over the enabled levels -> [K].
Tensor fuse_scores(std::span<const Tensor> level_scores, const Dense& score_fuse);

// (d^s, d^e) from the global fused sequence; unbounded unit offsets.
std::pair<Tensor, Tensor> regress_offsets(const Tensor& fused_global, const ConvHeadParams& start_head,
                                          const ConvHeadParams& end_head);

// Unit coordinates, 0 <= start <= end <= T - 1.
struct UnitSpan {
  double start = 0.0;
  double end = 0.0;
};

// t + d per boundary, clamped to [0, T - 1] and swapped if inverted.
std::vector<UnitSpan> refine(const std::vector<Candidate>& candidates, std::span<const double> offset_start,
                             std::span<const double> offset_end, std::size_t units);

// Seconds for a unit span: start * D / T and (end + 1) * D / T, so a
// full-span candidate covers the whole video.
Interval units_to_seconds(const UnitSpan& span, double duration, std::size_t units);

struct LocalizedMoment {
  std::size_t candidate = 0;
  double score = 0.0;
  Interval seconds;
};

// Sorted by score descending, ties by candidate index; at most top_m entries.
std::vector<LocalizedMoment> localize(std::span<const double> scores, const std::vector<UnitSpan>& refined,
                                      double duration, std::size_t units, std::size_t top_m);

}  // namespace hdrr

#endif  // HDRR_LOCALIZER_HPP_
