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

#include <doctest.h>

#include <algorithm>

#include "hdrr/error.hpp"
#include "hdrr/metrics.hpp"
#include "hdrr/rng.hpp"

using namespace hdrr;

namespace {

Interval random_interval(Rng& rng, double span) {
  double a = rng.uniform(0.0, span), b = rng.uniform(0.0, span);
  if (a > b) std::swap(a, b);
  return {a, b};
}

std::vector<std::vector<Interval>> random_predictions(Rng& rng, std::size_t samples, std::size_t per_sample) {
  std::vector<std::vector<Interval>> out(samples);
  for (auto& list : out) {
    for (std::size_t i = 0; i < per_sample; ++i) list.push_back(random_interval(rng, 30.0));
  }
  return out;
}

}  // namespace

TEST_CASE("interval_iou reference values") {
  CHECK(interval_iou({2, 6}, {2, 6}) == 1.0);
  CHECK(interval_iou({0, 1}, {2, 3}) == 0.0);
  CHECK(interval_iou({0, 2}, {2, 3}) == 0.0);
  CHECK(interval_iou({2, 6}, {4, 8}) == doctest::Approx(2.0 / 6.0));
  CHECK(interval_iou({3, 3}, {3, 3}) == 0.0);
  CHECK_THROWS_AS(interval_iou({5, 4}, {0, 1}), UsageError);
}

TEST_CASE("recall_at reference values") {
  const std::vector<Interval> truths{{0, 10}, {0, 10}, {0, 10}};
  // top-1 IoUs 0.8, 0.4, 0.6
  const std::vector<std::vector<Interval>> preds{{{0, 8}}, {{0, 4}}, {{0, 6}}};
  CHECK(recall_at(preds, truths, 1, 0.5) == doctest::Approx(2.0 / 3.0));
  CHECK(recall_at({{{0, 10}}, {{0, 10}}, {{0, 10}}}, truths, 1, 0.99) == 1.0);
  CHECK(recall_at({{{20, 30}}, {{20, 30}}, {{20, 30}}}, truths, 1, 0.0) == 0.0);
  // Strict inequality: IoU exactly 0.5 does not count.
  CHECK(recall_at({{{0, 5}}}, {{0, 10}}, 1, 0.5) == 0.0);
  CHECK_THROWS_WITH_AS(recall_at({{{0, 5}}, {}}, {{0, 10}, {0, 10}}, 1, 0.5), doctest::Contains("1"),
                       EvaluationError);
}

TEST_CASE("recall_at agrees with a brute-force recount") {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(12), k = 1 + rng.below(5), m = 1 + rng.below(6);
    const double threshold = rng.uniform(0.0, 0.95);
    const auto preds = random_predictions(rng, n, k);
    std::vector<Interval> truths;
    for (std::size_t i = 0; i < n; ++i) truths.push_back(random_interval(rng, 30.0));
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool hit = false;
      for (std::size_t j = 0; j < std::min(m, k); ++j) {
        const Interval& p = preds[i][j];
        const double inter = std::max(0.0, std::min(p.end, truths[i].end) - std::max(p.start, truths[i].start));
        const double uni = std::max(p.end, truths[i].end) - std::min(p.start, truths[i].start);
        if (uni > 0 && inter / uni > threshold) hit = true;
      }
      count += hit ? 1 : 0;
    }
    CHECK(recall_at(preds, truths, m, threshold) == static_cast<double>(count) / static_cast<double>(n));
  }
}

TEST_CASE("recall is monotone in n and m and invariant to rescaling") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    auto preds = random_predictions(rng, n, 5);
    std::vector<Interval> truths;
    for (std::size_t i = 0; i < n; ++i) truths.push_back(random_interval(rng, 30.0));
    for (std::size_t m = 1; m < 5; ++m) {
      CHECK(recall_at(preds, truths, m, 0.3) <= recall_at(preds, truths, m + 1, 0.3));
      CHECK(recall_at(preds, truths, m, 0.7) <= recall_at(preds, truths, m, 0.5));
    }
    const double before = recall_at(preds, truths, 2, 0.4);
    for (std::size_t i = 0; i < n; ++i) {
      const double factor = rng.uniform(0.1, 10.0);
      for (auto& p : preds[i]) p = {p.start * factor, p.end * factor};
      truths[i] = {truths[i].start * factor, truths[i].end * factor};
    }
    CHECK(recall_at(preds, truths, 2, 0.4) == before);
  }
}

TEST_CASE("compute_metrics reports every threshold and the mean top-1 IoU") {
  const std::vector<Interval> truths{{0, 10}, {0, 10}};
  const std::vector<std::vector<Interval>> preds{{{0, 8}}, {{0, 4}}};
  const MetricReport r = compute_metrics(preds, truths, 1, {0.3, 0.5, 0.7});
  REQUIRE(r.recalls.size() == 3);
  CHECK(r.recalls[0].recall == 1.0);
  CHECK(r.recalls[1].recall == 0.5);
  CHECK(r.recalls[2].recall == 0.5);
  CHECK(r.samples == 2);
  CHECK(r.mean_top1_iou == doctest::Approx(0.6));
}
