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

#include "hdrr/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "hdrr/error.hpp"

namespace hdrr {

double interval_iou(const Interval& a, const Interval& b) {
  if (a.start > a.end || b.start > b.end) {
    std::ostringstream msg;
    msg << "interval_iou: inverted interval [" << (a.start > a.end ? a.start : b.start) << ", "
        << (a.start > a.end ? a.end : b.end) << "]";
    throw UsageError(msg.str());
  }
  const double inter = std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  const double uni = (a.end - a.start) + (b.end - b.start) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double recall_at(const std::vector<std::vector<Interval>>& predictions, const std::vector<Interval>& truths,
                 std::size_t m, double n) {
  if (predictions.size() != truths.size()) {
    throw EvaluationError("recall_at: " + std::to_string(predictions.size()) + " prediction lists for " +
                          std::to_string(truths.size()) + " truths");
  }
  if (truths.empty()) throw EvaluationError("recall_at: no samples");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (predictions[i].empty()) {
      throw EvaluationError("recall_at: sample " + std::to_string(i) + " has no predictions");
    }
    const std::size_t top = std::min(m, predictions[i].size());
    for (std::size_t j = 0; j < top; ++j) {
      if (interval_iou(predictions[i][j], truths[i]) > n) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(truths.size());
}

MetricReport compute_metrics(const std::vector<std::vector<Interval>>& predictions,
                             const std::vector<Interval>& truths, std::size_t m,
                             const std::vector<double>& thresholds) {
  MetricReport report;
  report.top_m = m;
  report.samples = truths.size();
  for (double n : thresholds) report.recalls.push_back({n, recall_at(predictions, truths, m, n)});
  double total = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) total += interval_iou(predictions[i].front(), truths[i]);
  report.mean_top1_iou = truths.empty() ? 0.0 : total / static_cast<double>(truths.size());
  return report;
}

}  // namespace hdrr
