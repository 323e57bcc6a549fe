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

#include "hdrr/trainer.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "hdrr/adam.hpp"
#include "hdrr/error.hpp"
#include "hdrr/rng.hpp"

namespace hdrr {
namespace {

// Runs fn(i, worker) for i in [0, n); worker w takes i = w, w + threads, ...
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) fn(i, w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string threshold_key(std::size_t m, double n) {
  std::ostringstream key;
  key << "r_at_" << m << "_iou_" << n;
  return key.str();
}

nlohmann::ordered_json metrics_object(const MetricReport& report) {
  nlohmann::ordered_json doc;
  for (const auto& r : report.recalls) doc[threshold_key(report.top_m, r.threshold)] = r.recall;
  doc["samples"] = report.samples;
  doc["mean_iou"] = report.mean_top1_iou;
  return doc;
}

struct SampleGradient {
  std::vector<std::vector<double>> grads;
  LossBreakdown loss;
};

SampleGradient sample_gradient(ModelParams& params, const Sample& sample, const std::vector<Candidate>& candidates) {
  params.zero_grad();
  SampleGradient out;
  {
    GradTape tape;
    TapeScope scope(tape);
    const ModelOutput output = forward(params, sample.query, sample.video);
    const SampleLoss loss = sample_loss(output, candidates, sample, params.config.units, params.config.alpha);
    out.loss = loss.breakdown;
    if (!std::isfinite(loss.breakdown.total)) return out;
    tape.backward(loss.total);
  }
  out.grads.reserve(params.registry.size());
  for (const auto& p : params.registry) {
    auto g = p.tensor.grad();
    out.grads.emplace_back(g.begin(), g.end());
  }
  return out;
}

void copy_values(const ModelParams& from, ModelParams& to) {
  for (std::size_t i = 0; i < from.registry.size(); ++i) {
    auto src = from.registry[i].tensor.values();
    auto dst = to.registry[i].tensor.mutable_values();
    std::copy(src.begin(), src.end(), dst.begin());
  }
}

}  // namespace

Split split_dataset(std::size_t n) {
  const std::size_t heldout = n / 5;
  return {n - heldout, heldout};
}

std::string metric_report_json(const MetricReport& report) { return metrics_object(report).dump(); }

std::string epoch_log_json(const EpochLog& log) {
  nlohmann::ordered_json doc;
  doc["epoch"] = log.epoch;
  doc["L_aln"] = log.alignment;
  doc["L_reg"] = log.regression;
  doc["L_total"] = log.total;
  doc["heldout"] = log.heldout ? metrics_object(*log.heldout) : nlohmann::ordered_json(nullptr);
  return doc.dump();
}

std::size_t threads_from_env() {
  const char* env = std::getenv("HDRR_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError(std::string("HDRR_THREADS must be a positive integer, got '") + env + "'");
  return static_cast<std::size_t>(v);
}

TrainResult train(const std::vector<Sample>& samples, const RunConfig& config, const TrainOptions& options) {
  config.validate();
  if (samples.empty()) throw TrainingError("train: the dataset is empty");
  TrainResult result{ModelParams::create(config, config.seed), {}, split_dataset(samples.size())};
  ModelParams& params = result.params;
  const std::vector<Candidate> candidates = model_candidates(config);
  const std::vector<Sample> heldout(samples.begin() + static_cast<std::ptrdiff_t>(result.split.train), samples.end());

  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  std::vector<ModelParams> workers;
  for (std::size_t w = 1; w < threads; ++w) workers.push_back(params.clone());
  auto worker_params = [&](std::size_t w) -> ModelParams& { return w == 0 ? params : workers[w - 1]; };

  AdamState adam(params.registry, config.learning_rate);
  std::vector<std::size_t> order(result.split.train);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng = Rng::derive(config.seed, "epoch:" + std::to_string(epoch));
    rng.shuffle(order);

    EpochLog log;
    log.epoch = epoch;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const std::size_t count = end - begin;
      for (auto& w : workers) copy_values(params, w);
      std::vector<SampleGradient> per_sample(count);
      parallel_for(count, threads, [&](std::size_t i, std::size_t w) {
        per_sample[i] = sample_gradient(worker_params(w), samples[order[begin + i]], candidates);
      });

      std::vector<std::vector<double>> batch_grad(params.registry.size());
      for (std::size_t i = 0; i < count; ++i) {
        const SampleGradient& sg = per_sample[i];
        if (!std::isfinite(sg.loss.total)) {
          throw TrainingError("non-finite loss in epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(batch_index) + " (record '" + samples[order[begin + i]].id + "')");
        }
        log.alignment += sg.loss.alignment;
        log.regression += sg.loss.regression;
        log.total += sg.loss.total;
        for (std::size_t p = 0; p < batch_grad.size(); ++p) {
          const auto& g = sg.grads[p];
          if (g.empty()) continue;
          auto& acc = batch_grad[p];
          if (acc.empty()) acc.assign(g.size(), 0.0);
          for (std::size_t j = 0; j < g.size(); ++j) acc[j] += g[j];
        }
      }
      const double inv = 1.0 / static_cast<double>(count);
      for (auto& g : batch_grad) {
        for (double& v : g) v *= inv;
      }
      adam_step(params.registry, batch_grad, adam);
    }
    const double n = static_cast<double>(order.size());
    log.alignment /= n;
    log.regression /= n;
    log.total /= n;
    if (!heldout.empty()) log.heldout = evaluate(params, heldout, 1, threads).metrics;
    if (options.on_epoch) options.on_epoch(log);
    result.log.push_back(std::move(log));
  }
  return result;
}

Evaluation evaluate(const ModelParams& params, const std::vector<Sample>& samples, std::size_t top_m,
                    std::size_t threads) {
  if (samples.empty()) throw EvaluationError("evaluate: no samples");
  if (top_m == 0) throw EvaluationError("evaluate: top_m must be at least 1");
  const RunConfig& config = params.config;
  const std::vector<Candidate> candidates = model_candidates(config);
  Evaluation out;
  out.predictions.resize(samples.size());
  std::vector<LossBreakdown> losses(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i, std::size_t) {
    const Sample& s = samples[i];
    const ModelOutput output = forward(params, s.query, s.video);
    losses[i] = sample_loss(output, candidates, s, config.units, config.alpha).breakdown;
    const auto spans = refined_spans(output, candidates, config.units);
    out.predictions[i] = localize(output.scores.values(), spans, s.duration, config.units, top_m);
  });
  std::vector<std::vector<Interval>> predicted(samples.size());
  std::vector<Interval> truths;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (const auto& m : out.predictions[i]) predicted[i].push_back(m.seconds);
    truths.push_back(samples[i].moment);
    out.mean_loss.alignment += losses[i].alignment;
    out.mean_loss.regression += losses[i].regression;
    out.mean_loss.total += losses[i].total;
  }
  const double n = static_cast<double>(samples.size());
  out.mean_loss.alignment /= n;
  out.mean_loss.regression /= n;
  out.mean_loss.total /= n;
  out.metrics = compute_metrics(predicted, truths, top_m, config.iou_thresholds);
  return out;
}

}  // namespace hdrr
