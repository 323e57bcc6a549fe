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

#include "hdrr/params.hpp"

#include <cmath>

#include "hdrr/error.hpp"
#include "hdrr/ops.hpp"
#include "hdrr/rng.hpp"

namespace hdrr {
namespace {

class Builder {
 public:
  Builder(ModelParams& model, std::uint64_t seed) : model_(model), seed_(seed) {}

  Tensor make(const std::string& name, Shape shape, std::size_t fan_in) {
    Rng rng = Rng::derive(seed_, name);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::vector<double> values(shape_size(shape));
    for (double& v : values) v = rng.uniform(-bound, bound);
    Tensor t = Tensor::parameter(std::move(shape), std::move(values));
    model_.registry.push_back({name, t});
    return t;
  }

  Dense dense(const std::string& name, std::size_t in, std::size_t out) {
    return {make(name + ".weight", {in, out}, in), make(name + ".bias", {out}, in)};
  }

  GruParams gru(const std::string& name, std::size_t in, std::size_t hidden) {
    return {make(name + ".input_weights", {in, 3 * hidden}, in),
            make(name + ".recurrent_weights", {hidden, 3 * hidden}, hidden),
            make(name + ".bias", {3 * hidden}, hidden)};
  }

  BiGruParams bigru(const std::string& name, std::size_t in, std::size_t hidden) {
    return {gru(name + ".fwd", in, hidden), gru(name + ".bwd", in, hidden)};
  }

  ConvHeadParams conv_head(const std::string& name, const std::vector<std::size_t>& sizes,
                           std::size_t channels) {
    ConvHeadParams head;
    for (std::size_t w : sizes) {
      const std::string n = name + ".w" + std::to_string(w);
      head.kernels.push_back(make(n + ".kernel", {w, channels, 1}, w * channels));
      head.biases.push_back(make(n + ".bias", {1}, w * channels));
    }
    return head;
  }

 private:
  ModelParams& model_;
  std::uint64_t seed_;
};

}  // namespace

const char* level_name(Level level) {
  switch (level) {
    case Level::kGlobal:
      return "global";
    case Level::kAction:
      return "action";
    case Level::kObject:
      return "object";
  }
  return "?";
}

bool level_enabled(Level level, const AblationFlags& flags) {
  switch (level) {
    case Level::kGlobal:
      return true;
    case Level::kAction:
      return flags.use_action;
    case Level::kObject:
      return flags.use_object;
  }
  return false;
}

std::vector<Level> active_levels(const AblationFlags& flags) {
  std::vector<Level> out;
  for (Level l : kAllLevels) {
    if (level_enabled(l, flags)) out.push_back(l);
  }
  return out;
}

Tensor affine(const Tensor& x, const Dense& layer) { return add(matmul(x, layer.weight), layer.bias); }

ModelParams ModelParams::create(const RunConfig& config, std::uint64_t seed) {
  config.validate();
  ModelParams m;
  m.config = config;
  Builder b(m, seed);
  const std::size_t ds = config.hidden_dim;
  const std::size_t df = config.fused_dim;
  if (df % 2 != 0) throw ConfigError("d_f must be even for the bidirectional fusion blocks");

  m.text_gru = b.bigru("text.gru", config.word_dim, ds);
  m.text_fuse = b.dense("text.fuse", 2 * ds, ds);
  m.video_gru = b.bigru("video.gru", config.feature_dim, ds);
  m.video_fuse = b.dense("video.fuse", 2 * ds, ds);

  for (Level l : kAllLevels) {
    LevelParams& lp = m.levels[static_cast<std::size_t>(l)];
    lp.enabled = level_enabled(l, config.ablation);
    if (!lp.enabled) continue;
    const std::string prefix = std::string("level.") + level_name(l);
    if (config.ablation.use_self_attention) {
      lp.attention = AttentionParams{b.make(prefix + ".attn.query", {ds, ds}, ds),
                                     b.make(prefix + ".attn.key", {ds, ds}, ds),
                                     b.make(prefix + ".attn.value", {ds, ds}, ds),
                                     b.make(prefix + ".attn.pool", {1, config.max_query_len},
                                            config.max_query_len)};
    }
    if (l != Level::kGlobal) lp.video_projection = b.dense(prefix + ".video_proj", ds, ds);
    if (config.ablation.use_res_bigru) {
      for (std::size_t i = 0; i < config.depth; ++i) {
        const std::string bn = prefix + ".fusion.block" + std::to_string(i);
        lp.fusion.blocks.push_back({b.bigru(bn + ".gru", df, df / 2), b.dense(bn + ".out", df, df)});
      }
    } else {
      lp.fusion.flat = b.dense(prefix + ".fusion.flat", df, df);
    }
    lp.rank = b.conv_head(prefix + ".rank", config.filter_sizes, df);
  }
  const std::size_t n_levels = active_levels(config.ablation).size();
  m.score_fuse = b.dense("score_fuse", n_levels, 1);
  m.offset_start = b.conv_head("offset.start", config.filter_sizes, df);
  m.offset_end = b.conv_head("offset.end", config.filter_sizes, df);
  return m;
}

ModelParams ModelParams::clone() const {
  ModelParams copy = create(config, 0);
  for (std::size_t i = 0; i < registry.size(); ++i) {
    auto src = registry[i].tensor.values();
    auto dst = copy.registry[i].tensor.mutable_values();
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return copy;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : registry) n += p.tensor.size();
  return n;
}

void ModelParams::zero_grad() {
  for (auto& p : registry) p.tensor.zero_grad();
}

}  // namespace hdrr
