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

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hdrr/fusion.hpp"
#include "hdrr/gradcheck.hpp"
#include "hdrr/gru.hpp"
#include "hdrr/localizer.hpp"
#include "hdrr/losses.hpp"
#include "hdrr/model.hpp"
#include "hdrr/ops.hpp"
#include "hdrr/rng.hpp"
#include "hdrr/text_encoder.hpp"

namespace hdrr {
namespace {

constexpr std::size_t kTrialsPerOp = 6;

std::vector<double> random_values(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

// Values kept away from the non-differentiable point `kink` by at least `gap`.
std::vector<double> values_avoiding(Rng& rng, std::size_t n, double kink, double gap) {
  std::vector<double> v(n);
  for (double& x : v) {
    do {
      x = rng.uniform(-3.0, 3.0);
    } while (std::abs(std::abs(x) - kink) < gap);
  }
  return v;
}

Tensor param(Rng& rng, Shape shape, double lo = -1.0, double hi = 1.0) {
  const std::size_t n = shape_size(shape);
  return Tensor::parameter(std::move(shape), random_values(rng, n, lo, hi));
}

std::size_t dim(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); }

// sum(y * W) for a fixed random W, so every output entry carries a distinct
// upstream gradient.
Tensor weighted_sum(const Tensor& y, const Tensor& weights) { return sum(mul(y, weights)); }

Tensor probe_for(Rng& rng, const Shape& shape) { return Tensor(shape, random_values(rng, shape_size(shape), -1.0, 1.0)); }

GruParams gru_params(Rng& rng, std::size_t d_in, std::size_t d_h) {
  return {param(rng, {d_in, 3 * d_h}), param(rng, {d_h, 3 * d_h}), param(rng, {3 * d_h})};
}

std::vector<NamedTensor> gru_named(const GruParams& p, const std::string& prefix) {
  return {{prefix + ".input_weights", p.input_weights},
          {prefix + ".recurrent_weights", p.recurrent_weights},
          {prefix + ".bias", p.bias}};
}

class Suite {
 public:
  explicit Suite(std::uint64_t seed) : seed_(seed) {}

  // Runs `trials` randomized instances of one op. `build` draws shapes and
  // values from the rng and returns the loss closure plus its inputs.
  using Builder = std::function<std::pair<std::function<Tensor()>, std::vector<NamedTensor>>(Rng&)>;

  void op(const std::string& name, const Builder& build, std::size_t trials = kTrialsPerOp) {
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng = Rng::derive(seed_, name + ":" + std::to_string(t));
      auto [fn, inputs] = build(rng);
      cases_.push_back({name + "#" + std::to_string(t), finite_diff_check(fn, std::move(inputs), per_op_)});
    }
  }

  void add_case(std::string name, const std::function<Tensor()>& fn, std::vector<NamedTensor> inputs,
                const GradCheckOptions& options) {
    cases_.push_back({std::move(name), finite_diff_check(fn, std::move(inputs), options)});
  }

  std::vector<GradCheckCase> take() { return std::move(cases_); }

 private:
  std::uint64_t seed_;
  GradCheckOptions per_op_;
  std::vector<GradCheckCase> cases_;
};

void elementwise_ops(Suite& s) {
  auto unary_case = [&](const std::string& name, Tensor (*fn)(const Tensor&), bool avoid_zero, double kink) {
    s.op(name, [=](Rng& rng) {
      const Shape shape{dim(rng, 1, 5), dim(rng, 1, 6)};
      const Tensor x = avoid_zero || kink > 0.0 ? Tensor::parameter(shape, values_avoiding(rng, shape_size(shape), kink, 0.05))
                                                : param(rng, shape, -3.0, 3.0);
      const Tensor w = probe_for(rng, shape);
      return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(fn(x), w); }),
                            std::vector<NamedTensor>{{"x", x}});
    });
  };
  unary_case("relu", relu, true, 0.0);
  unary_case("sigmoid", sigmoid, false, 0.0);
  unary_case("tanh", tanh, false, 0.0);
  unary_case("smooth_l1", smooth_l1, false, 1.0);
  unary_case("softmax_last_dim", softmax_last_dim, false, 0.0);

  auto binary_case = [&](const std::string& name, Tensor (*fn)(const Tensor&, const Tensor&)) {
    s.op(name, [=](Rng& rng) {
      const Shape shape{dim(rng, 1, 5), dim(rng, 1, 6)};
      const std::size_t mode = rng.below(3);  // same shape, scalar, row broadcast
      const Shape b_shape = mode == 0 ? shape : mode == 1 ? Shape{1} : Shape{shape[1]};
      const Tensor a = param(rng, shape);
      const Tensor b = param(rng, b_shape);
      const Tensor w = probe_for(rng, shape);
      return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(fn(a, b), w); }),
                            std::vector<NamedTensor>{{"a", a}, {"b", b}});
    });
  };
  binary_case("add", add);
  binary_case("sub", sub);
  binary_case("mul", mul);

  s.op("scale", [](Rng& rng) {
    const Shape shape{dim(rng, 1, 8)};
    const Tensor x = param(rng, shape);
    const double f = rng.uniform(-2.0, 2.0);
    const Tensor w = probe_for(rng, shape);
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(scale(x, f), w); }),
                          std::vector<NamedTensor>{{"x", x}});
  });
}

void structural_ops(Suite& s) {
  s.op("matmul", [](Rng& rng) {
    const std::size_t n = dim(rng, 1, 5), k = dim(rng, 1, 5), m = dim(rng, 1, 5);
    const Tensor a = param(rng, {n, k});
    const Tensor b = param(rng, {k, m});
    const Tensor w = probe_for(rng, {n, m});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(matmul(a, b), w); }),
                          std::vector<NamedTensor>{{"a", a}, {"b", b}});
  });
  s.op("transpose", [](Rng& rng) {
    const std::size_t r = dim(rng, 1, 5), c = dim(rng, 1, 5);
    const Tensor a = param(rng, {r, c});
    const Tensor w = probe_for(rng, {c, r});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(transpose(a), w); }),
                          std::vector<NamedTensor>{{"a", a}});
  });
  s.op("concat", [](Rng& rng) {
    const std::size_t axis = rng.below(2);
    const std::size_t r = dim(rng, 1, 4), c = dim(rng, 1, 4);
    const std::size_t extra = dim(rng, 1, 3);
    const Tensor a = param(rng, {r, c});
    const Tensor b = param(rng, axis == 0 ? Shape{extra, c} : Shape{r, extra});
    const Tensor w = probe_for(rng, axis == 0 ? Shape{r + extra, c} : Shape{r, c + extra});
    return std::make_pair(std::function<Tensor()>([=] {
                            const std::vector<Tensor> parts{a, b};
                            return weighted_sum(concat(parts, axis), w);
                          }),
                          std::vector<NamedTensor>{{"a", a}, {"b", b}});
  });
  s.op("concat_last_dim", [](Rng& rng) {
    const std::size_t r = dim(rng, 1, 4);
    const Tensor a = param(rng, {r, dim(rng, 1, 3)});
    const Tensor b = param(rng, {r, dim(rng, 1, 3)});
    const Tensor c = param(rng, {r, dim(rng, 1, 3)});
    const Tensor w = probe_for(rng, {r, a.dim(1) + b.dim(1) + c.dim(1)});
    return std::make_pair(std::function<Tensor()>([=] {
                            const std::vector<Tensor> parts{a, b, c};
                            return weighted_sum(concat_last_dim(parts), w);
                          }),
                          std::vector<NamedTensor>{{"a", a}, {"b", b}, {"c", c}});
  });
  s.op("reshape", [](Rng& rng) {
    const std::size_t r = dim(rng, 1, 4), c = dim(rng, 1, 4);
    const Tensor a = param(rng, {r, c});
    const Tensor w = probe_for(rng, {c, r});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(reshape(a, {c, r}), w); }),
                          std::vector<NamedTensor>{{"a", a}});
  });
  s.op("slice_cols", [](Rng& rng) {
    const std::size_t r = dim(rng, 1, 4), c = dim(rng, 2, 6);
    const std::size_t begin = rng.below(c - 1);
    const std::size_t end = begin + 1 + rng.below(c - begin);
    const Tensor a = param(rng, {r, c});
    const Tensor w = probe_for(rng, {r, end - begin});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(slice_cols(a, begin, end), w); }),
                          std::vector<NamedTensor>{{"a", a}});
  });
  s.op("repeat_rows", [](Rng& rng) {
    const std::size_t d = dim(rng, 1, 5), rows = dim(rng, 1, 5);
    const Tensor v = param(rng, {d});
    const Tensor w = probe_for(rng, {rows, d});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(repeat_rows(v, rows), w); }),
                          std::vector<NamedTensor>{{"v", v}});
  });
  s.op("select", [](Rng& rng) {
    const std::size_t n = dim(rng, 1, 8);
    const std::size_t index = rng.below(n);
    const Tensor v = param(rng, {n});
    return std::make_pair(std::function<Tensor()>([=] { return scale(select(v, index), 1.7); }),
                          std::vector<NamedTensor>{{"v", v}});
  });
  s.op("sum_mean", [](Rng& rng) {
    const Tensor a = param(rng, {dim(rng, 1, 4), dim(rng, 1, 4)});
    return std::make_pair(std::function<Tensor()>([=] { return add(sum(tanh(a)), scale(mean(sigmoid(a)), 3.0)); }),
                          std::vector<NamedTensor>{{"a", a}});
  });
  s.op("conv1d", [](Rng& rng) {
    const std::size_t t = dim(rng, 2, 8), c_in = dim(rng, 1, 4), c_out = dim(rng, 1, 3);
    const std::size_t w = dim(rng, 1, t);
    const Tensor input = param(rng, {t, c_in});
    const Tensor kernel = param(rng, {w, c_in, c_out});
    const Tensor bias = param(rng, {c_out});
    const Tensor probe = probe_for(rng, {t - w + 1, c_out});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(conv1d(input, kernel, bias), probe); }),
                          std::vector<NamedTensor>{{"input", input}, {"kernel", kernel}, {"bias", bias}});
  });
  s.op("binary_cross_entropy", [](Rng& rng) {
    const std::size_t k = dim(rng, 1, 10);
    const Tensor logits = param(rng, {k}, -3.0, 3.0);
    const std::vector<double> targets = random_values(rng, k, 0.0, 1.0);
    return std::make_pair(std::function<Tensor()>([=] { return binary_cross_entropy(sigmoid(logits), targets); }),
                          std::vector<NamedTensor>{{"logits", logits}});
  });
}

void recurrent_ops(Suite& s) {
  s.op("gru_cell", [](Rng& rng) {
    const std::size_t d_in = dim(rng, 1, 4), d_h = dim(rng, 1, 4);
    const GruParams p = gru_params(rng, d_in, d_h);
    const Tensor x = param(rng, {d_in});
    const Tensor h = param(rng, {d_h});
    const Tensor w = probe_for(rng, {d_h});
    auto named = gru_named(p, "gru");
    named.push_back({"x", x});
    named.push_back({"h_prev", h});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(gru_cell(x, h, p), w); }), named);
  });
  s.op("gru_sequence", [](Rng& rng) {
    const std::size_t t = dim(rng, 1, 5), d_in = dim(rng, 1, 4), d_h = dim(rng, 1, 4);
    const bool reverse = rng.below(2) == 1;
    const GruParams p = gru_params(rng, d_in, d_h);
    const Tensor x = param(rng, {t, d_in});
    const Tensor w = probe_for(rng, {t, d_h});
    auto named = gru_named(p, "gru");
    named.push_back({"inputs", x});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(gru_sequence(x, p, reverse), w); }),
                          named);
  });
  s.op("bigru", [](Rng& rng) {
    const std::size_t t = dim(rng, 1, 5), d_in = dim(rng, 1, 3), d_h = dim(rng, 1, 3);
    const BiGruParams p{gru_params(rng, d_in, d_h), gru_params(rng, d_in, d_h)};
    const Tensor x = param(rng, {t, d_in});
    const Tensor w = probe_for(rng, {t, 2 * d_h});
    auto named = gru_named(p.forward, "fwd");
    for (auto& n : gru_named(p.backward, "bwd")) named.push_back(n);
    named.push_back({"inputs", x});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(bigru(x, p), w); }), named);
  });
}

void model_blocks(Suite& s) {
  s.op("attend_pool", [](Rng& rng) {
    const std::size_t heads = dim(rng, 1, 2);
    const std::size_t d = heads * dim(rng, 1, 3), l = dim(rng, 1, 5);
    const AttentionParams p{param(rng, {d, d}), param(rng, {d, d}), param(rng, {d, d}), param(rng, {1, l})};
    const Tensor seq = param(rng, {l, d});
    const Tensor w = probe_for(rng, {d});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(attend_pool(seq, p, heads), w); }),
                          std::vector<NamedTensor>{
                              {"query", p.query}, {"key", p.key}, {"value", p.value}, {"pool", p.pool}, {"seq", seq}});
  });
  s.op("mean_pool", [](Rng& rng) {
    const std::size_t l = dim(rng, 1, 5), d = dim(rng, 1, 4);
    std::vector<bool> rows(l);
    for (std::size_t i = 0; i < l; ++i) rows[i] = rng.below(2) == 1;
    rows[rng.below(l)] = true;
    const Tensor seq = param(rng, {l, d});
    const Tensor w = probe_for(rng, {d});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(mean_pool(seq, rows), w); }),
                          std::vector<NamedTensor>{{"seq", seq}});
  });
  s.op("res_block", [](Rng& rng) {
    const std::size_t t = dim(rng, 1, 4), d_f = 2 * dim(rng, 1, 2);
    ResBlockParams block{{gru_params(rng, d_f, d_f / 2), gru_params(rng, d_f, d_f / 2)},
                         {param(rng, {d_f, d_f}), param(rng, {d_f})}};
    const Tensor prev = param(rng, {t, d_f});
    const Tensor w = probe_for(rng, {t, d_f});
    auto named = gru_named(block.gru.forward, "fwd");
    for (auto& n : gru_named(block.gru.backward, "bwd")) named.push_back(n);
    named.push_back({"out.weight", block.out.weight});
    named.push_back({"out.bias", block.out.bias});
    named.push_back({"previous", prev});
    return std::make_pair(std::function<Tensor()>([=] { return weighted_sum(res_block(prev, block), w); }), named);
  });
}

// Every registered parameter of a tiny model through the full training loss.
void full_model(Suite& s, std::uint64_t seed) {
  RunConfig config;
  config.max_query_len = 4;
  config.units = 6;
  config.word_dim = 3;
  config.feature_dim = 3;
  config.hidden_dim = 4;
  config.fused_dim = 8;
  config.depth = 2;
  config.filter_sizes = {2, 3};
  config.heads = 2;
  config.alpha = 1.0;
  config.seed = seed;
  config.validate();

  Rng rng = Rng::derive(seed, "full_model");
  const ModelParams params = ModelParams::create(config, seed);
  Sample sample;
  sample.id = "gradcheck";
  sample.query.words = Tensor({4, 3}, random_values(rng, 12, -1.0, 1.0));
  sample.query.length = 3;
  sample.query.action_mask = {false, true, false, false};
  sample.query.object_mask = {false, false, true, false};
  sample.video = Tensor({6, 3}, random_values(rng, 18, -1.0, 1.0));
  sample.duration = 12.0;
  sample.moment = {3.1, 7.4};
  const std::vector<Candidate> candidates = model_candidates(config);

  GradCheckOptions options;
  options.rel_tol = 1e-3;
  s.add_case(
      "full_model",
      [&params, sample, candidates, config] {
        const ModelOutput out = forward(params, sample.query, sample.video);
        return sample_loss(out, candidates, sample, config.units, config.alpha).total;
      },
      params.registry, options);
}

}  // namespace

std::vector<GradCheckCase> run_gradcheck_suite(std::uint64_t seed) {
  Suite suite(seed);
  elementwise_ops(suite);
  structural_ops(suite);
  recurrent_ops(suite);
  model_blocks(suite);
  full_model(suite, seed);
  return suite.take();
}

}  // namespace hdrr
