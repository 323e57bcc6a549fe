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

#ifndef HDRR_TRAINER_HPP_
#define HDRR_TRAINER_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hdrr/config.hpp"
#include "hdrr/localizer.hpp"
#include "hdrr/losses.hpp"
#include "hdrr/metrics.hpp"
#include "hdrr/model.hpp"
#include "hdrr/params.hpp"

namespace hdrr {

// First `train` samples train, the last 20% (rounded down) are held out.
struct Split {
  std::size_t train = 0;
  std::size_t heldout = 0;
};
Split split_dataset(std::size_t n);

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double alignment = 0.0;  // means over the epoch's training samples
  double regression = 0.0;
  double total = 0.0;
  std::optional<MetricReport> heldout;
};

std::string epoch_log_json(const EpochLog& log);
// "r_at_<m>_iou_<n>" keyed recalls plus sample count and mean top-1 IoU.
std::string metric_report_json(const MetricReport& report);

struct TrainOptions {
  std::size_t threads = 1;
  std::function<void(const EpochLog&)> on_epoch;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLog> log;
  Split split;
};

// Mini-batch Adam on the mean of per-sample losses. Batch order is shuffled
// per epoch from (seed, epoch); per-sample gradients are reduced in batch
// order, so results do not depend on the thread count.
TrainResult train(const std::vector<Sample>& samples, const RunConfig& config, const TrainOptions& options = {});

struct Evaluation {
  MetricReport metrics;
  LossBreakdown mean_loss;  // best_candidate unused
  std::vector<std::vector<LocalizedMoment>> predictions;
};

Evaluation evaluate(const ModelParams& params, const std::vector<Sample>& samples, std::size_t top_m,
                    std::size_t threads = 1);

// HDRR_THREADS, default 1.
std::size_t threads_from_env();

}  // namespace hdrr

#endif  // HDRR_TRAINER_HPP_
