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

#include "hdrr/localizer.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <string>

#include "hdrr/error.hpp"
#include "hdrr/ops.hpp"

namespace hdrr {

std::vector<Candidate> enumerate_candidates(std::size_t units, const std::vector<std::size_t>& filter_sizes) {
  std::vector<Candidate> out;
  std::size_t scale = 0;
  for (std::size_t w : filter_sizes) {
    if (w == 0 || w > units) {
      std::cerr << "warning: dropping filter size " << w << " (T = " << units << ")\n";
      continue;
    }
    for (std::size_t p = 0; p + w <= units; ++p) out.push_back({p, p + w - 1, scale, w});
    ++scale;
  }
  if (out.empty()) throw ConfigError("no filter size fits T = " + std::to_string(units));
  return out;
}

Tensor conv_head_outputs(const Tensor& fused, const ConvHeadParams& head) {
  std::vector<Tensor> parts;
  parts.reserve(head.kernels.size());
  for (std::size_t q = 0; q < head.kernels.size(); ++q) {
    parts.push_back(conv1d(fused, head.kernels[q], head.biases[q]));
  }
  const Tensor stacked = concat(parts, 0);  // [K x 1]
  return reshape(stacked, {stacked.size()});
}

Tensor rank_level(const Tensor& fused, const ConvHeadParams& head) {
  return sigmoid(conv_head_outputs(fused, head));
}

Tensor fuse_scores(std::span<const Tensor> level_scores, const Dense& score_fuse) {
  if (level_scores.empty()) throw ConfigError("fuse_scores: no level scores");
  if (score_fuse.weight.dim(0) != level_scores.size()) {
    throw DimensionError("fuse_scores: f_h expects " + std::to_string(score_fuse.weight.dim(0)) +
                         " inputs, got " + std::to_string(level_scores.size()));
  }
  const std::size_t k = level_scores[0].size();
  std::vector<Tensor> columns;
  for (const Tensor& s : level_scores) columns.push_back(reshape(s, {k, 1}));
  const Tensor stacked = concat_last_dim(columns);  // [K x n_levels]
  return reshape(sigmoid(affine(stacked, score_fuse)), {k});
}

std::pair<Tensor, Tensor> regress_offsets(const Tensor& fused_global, const ConvHeadParams& start_head,
                                          const ConvHeadParams& end_head) {
  return {conv_head_outputs(fused_global, start_head), conv_head_outputs(fused_global, end_head)};
}

std::vector<UnitSpan> refine(const std::vector<Candidate>& candidates, std::span<const double> offset_start,
                             std::span<const double> offset_end, std::size_t units) {
  if (offset_start.size() != candidates.size() || offset_end.size() != candidates.size()) {
    throw DimensionError("refine: offsets do not match " + std::to_string(candidates.size()) + " candidates");
  }
  const double last = static_cast<double>(units - 1);
  std::vector<UnitSpan> out(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    double s = std::clamp(static_cast<double>(candidates[k].start) + offset_start[k], 0.0, last);
    double e = std::clamp(static_cast<double>(candidates[k].end) + offset_end[k], 0.0, last);
    if (s > e) std::swap(s, e);
    out[k] = {s, e};
  }
  return out;
}

Interval units_to_seconds(const UnitSpan& span, double duration, std::size_t units) {
  const double per_unit = duration / static_cast<double>(units);
  return {span.start * per_unit, std::min(duration, (span.end + 1.0) * per_unit)};
}

std::vector<LocalizedMoment> localize(std::span<const double> scores, const std::vector<UnitSpan>& refined,
                                      double duration, std::size_t units, std::size_t top_m) {
  if (scores.size() != refined.size()) throw DimensionError("localize: scores and boundaries differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const std::size_t n = std::min(top_m, order.size());
  std::vector<LocalizedMoment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = order[i];
    out.push_back({k, scores[k], units_to_seconds(refined[k], duration, units)});
  }
  return out;
}

}  // namespace hdrr
