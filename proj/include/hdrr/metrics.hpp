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

#ifndef HDRR_METRICS_HPP_
#define HDRR_METRICS_HPP_

#include <cstddef>
#include <vector>

#include "hdrr/dataset.hpp"

namespace hdrr {

// |a n b| / |a u b|, with 0 when the union is empty. UsageError if either
// interval has start > end.
double interval_iou(const Interval& a, const Interval& b);

// Fraction of samples whose first `m` predictions contain one with
// IoU > n against the truth. EvaluationError names the first sample without
// predictions.
double recall_at(const std::vector<std::vector<Interval>>& predictions, const std::vector<Interval>& truths,
                 std::size_t m, double n);

struct RecallEntry {
  double threshold = 0.0;
  double recall = 0.0;
};

struct MetricReport {
  std::size_t top_m = 1;
  std::vector<RecallEntry> recalls;  // one per configured threshold, ascending input order
  std::size_t samples = 0;
  double mean_top1_iou = 0.0;
};

MetricReport compute_metrics(const std::vector<std::vector<Interval>>& predictions,
                             const std::vector<Interval>& truths, std::size_t m,
                             const std::vector<double>& thresholds);

}  // namespace hdrr

#endif  // HDRR_METRICS_HPP_
