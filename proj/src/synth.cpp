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

#include "hdrr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "hdrr/error.hpp"
#include "hdrr/rng.hpp"

namespace hdrr {
namespace {

constexpr double kNoise = 0.5;
constexpr std::size_t kGap = 3;  // units between the target and the distractor

std::vector<double> prototype(std::uint64_t seed, const std::string& word, std::size_t dim) {
  Rng rng = Rng::derive(seed, "prototype:" + word);
  std::vector<double> v(dim);
  for (double& x : v) x = rng.normal();
  return v;
}

std::vector<std::string> make_query(Rng& rng, const std::string& verb, const std::string& noun,
                                    std::size_t max_len) {
  const std::vector<std::vector<std::string>> templates = {
      {"a", "person", verb, "the", noun},
      {"person", verb, "a", noun},
      {"the", "person", "is", verb, "the", noun},
  };
  std::vector<const std::vector<std::string>*> fitting;
  for (const auto& t : templates) {
    if (t.size() <= max_len) fitting.push_back(&t);
  }
  if (fitting.empty()) {
    std::vector<std::string> shortest = {verb, noun};
    shortest.resize(std::min<std::size_t>(2, max_len));
    return shortest;
  }
  return *fitting[rng.below(fitting.size())];
}

void plant(FeatureMatrix& f, std::size_t begin, std::size_t len, const std::vector<double>& a,
           const std::vector<double>& o) {
  for (std::size_t t = begin; t < begin + len; ++t) {
    for (std::size_t j = 0; j < f.dim; ++j) f.values[t * f.dim + j] += a[j] + o[j];
  }
}

}  // namespace

RunConfig synthetic_config() {
  RunConfig c;
  c.max_query_len = 8;
  c.units = 75;
  c.word_dim = 16;
  c.feature_dim = 16;
  c.hidden_dim = 16;
  c.fused_dim = 32;
  c.depth = 3;
  c.filter_sizes = {6, 12, 24};
  c.heads = 4;
  c.learning_rate = 0.003;
  c.batch_size = 4;
  c.epochs = 200;
  return c;
}

const std::vector<std::string>& synthetic_actions() {
  static const std::vector<std::string> words = {"holding", "opening", "eating", "washing"};
  return words;
}

const std::vector<std::string>& synthetic_objects() {
  static const std::vector<std::string> words = {"book", "door", "sandwich", "laptop"};
  return words;
}

SyntheticDataset generate_synthetic(std::uint64_t seed, std::size_t n_records, const RunConfig& config) {
  if (n_records == 0) throw ConfigError("synthesize: n_records must be at least 1");
  const std::size_t units = config.units;
  const std::size_t dim = config.feature_dim;
  const auto& actions = synthetic_actions();
  const auto& objects = synthetic_objects();

  std::vector<std::vector<double>> action_proto, object_proto;
  for (const auto& w : actions) action_proto.push_back(prototype(seed, w, dim));
  for (const auto& w : objects) object_proto.push_back(prototype(seed, w, dim));

  const std::size_t min_len = std::max<std::size_t>(1, units / 12);
  const std::size_t max_len = std::max(min_len, units * 3 / 8);

  SyntheticDataset out;
  for (std::size_t i = 0; i < n_records; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "synth_%04zu", i);
    Rng rng = Rng::derive(seed, std::string("record:") + id);

    FeatureMatrix f;
    f.units = units;
    f.dim = dim;
    f.values.resize(units * dim);
    for (double& v : f.values) v = kNoise * rng.normal();

    const std::size_t ai = rng.below(actions.size());
    const std::size_t oi = rng.below(objects.size());
    const std::size_t len = min_len + rng.below(max_len - min_len + 1);
    const std::size_t start = rng.below(units - len + 1);
    plant(f, start, len, action_proto[ai], object_proto[oi]);

    // Distractor: a pair sharing neither word, separated from the target.
    const std::size_t dlen = min_len + rng.below(max_len - min_len + 1);
    std::vector<std::size_t> slots;
    for (std::size_t p = 0; p + dlen <= units; ++p) {
      const bool before = p + dlen + kGap <= start;
      const bool after = p >= start + len + kGap;
      if (before || after) slots.push_back(p);
    }
    if (!slots.empty()) {
      const std::size_t dai = (ai + 1 + rng.below(actions.size() - 1)) % actions.size();
      const std::size_t doi = (oi + 1 + rng.below(objects.size() - 1)) % objects.size();
      plant(f, slots[rng.below(slots.size())], dlen, action_proto[dai], object_proto[doi]);
    }

    DatasetRecord r;
    r.id = id;
    r.feature_path = std::string("features/") + id + ".vfea";
    r.duration_seconds = std::round(rng.uniform(20.0, 40.0) * 100.0) / 100.0;
    r.tokens = make_query(rng, actions[ai], objects[oi], config.max_query_len);
    std::tie(r.action_mask, r.object_mask) = lexicon_tag(r.tokens);
    const double duration = r.duration_seconds;
    const auto to_sec = [&](std::size_t u) {
      return std::min(duration, duration * static_cast<double>(u) / static_cast<double>(units));
    };
    r.moment = {to_sec(start), to_sec(start + len)};
    // Stored features round-trip through f32.
    for (double& v : f.values) v = static_cast<double>(static_cast<float>(v));
    out.records.push_back(std::move(r));
    out.features.push_back(std::move(f));
  }
  return out;
}

void write_synthetic(const SyntheticDataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "features");
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    write_feature_file(dataset.features[i], dir / dataset.records[i].feature_path);
  }
  save_manifest(dataset.records, dir / "manifest.jsonl");
}

}  // namespace hdrr
