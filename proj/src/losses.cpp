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

#include "hdrr/losses.hpp"

#include "hdrr/error.hpp"
#include "hdrr/metrics.hpp"
#include "hdrr/ops.hpp"

namespace hdrr {

std::vector<double> iou_targets(const std::vector<Candidate>& candidates, const Interval& moment,
                                double duration, std::size_t units) {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    const UnitSpan span{static_cast<double>(c.start), static_cast<double>(c.end)};
    out.push_back(interval_iou(units_to_seconds(span, duration, units), moment));
  }
  return out;
}

std::size_t best_candidate(std::span<const double> targets) {
  if (targets.empty()) throw ConfigError("best_candidate: no candidates");
  std::size_t best = 0;
  for (std::size_t k = 1; k < targets.size(); ++k) {
    if (targets[k] > targets[best]) best = k;
  }
  return best;
}

UnitSpan moment_to_units(const Interval& moment, double duration, std::size_t units) {
  const double per_second = static_cast<double>(units) / duration;
  return {moment.start * per_second, moment.end * per_second - 1.0};
}

Tensor alignment_loss(const Tensor& scores, std::span<const double> iou) {
  if (!scores.defined() || iou.empty()) throw ConfigError("alignment_loss: K = 0 candidates");
  return binary_cross_entropy(scores, iou, kScoreClamp);
}

Tensor regression_loss(const Tensor& refined_start, const Tensor& refined_end, const UnitSpan& truth) {
  const Tensor ds = sub(Tensor::scalar(truth.start), refined_start);
  const Tensor de = sub(Tensor::scalar(truth.end), refined_end);
  return add(smooth_l1(ds), smooth_l1(de));
}

Tensor total_loss(const Tensor& alignment, const Tensor& regression, double alpha) {
  return add(alignment, scale(regression, alpha));
}

SampleLoss sample_loss(const ModelOutput& output, const std::vector<Candidate>& candidates, const Sample& sample,
                       std::size_t units, double alpha) {
  const auto targets = iou_targets(candidates, sample.moment, sample.duration, units);
  const std::size_t best = best_candidate(targets);
  const Tensor aln = alignment_loss(output.scores, targets);
  const Candidate& c = candidates[best];
  const Tensor start = add(select(output.offset_start, best), Tensor::scalar(static_cast<double>(c.start)));
  const Tensor end = add(select(output.offset_end, best), Tensor::scalar(static_cast<double>(c.end)));
  const Tensor reg = regression_loss(start, end, moment_to_units(sample.moment, sample.duration, units));
  SampleLoss out;
  out.total = total_loss(aln, reg, alpha);
  out.breakdown = {aln.item(), reg.item(), out.total.item(), best};
  return out;
}

}  // namespace hdrr
