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

#include <cmath>
#include <limits>

#include "hdrr/error.hpp"
#include "hdrr/gradcheck.hpp"
#include "hdrr/gru.hpp"
#include "hdrr/ops.hpp"
#include "hdrr/rng.hpp"
#include "support.hpp"

using namespace hdrr;
using hdrr::testing::values_of;
using hdrr::testing::random_parameter;
using hdrr::testing::random_tensor;

namespace {

std::vector<double> grad_of(const Tensor& t) {
  auto g = t.grad();
  return {g.begin(), g.end()};
}

}  // namespace

TEST_CASE("tensor construction validates shape and size") {
  CHECK_THROWS_AS(Tensor({2, 3}, std::vector<double>(5)), DimensionError);
  CHECK_THROWS_AS(Tensor(Shape{0, 3}), DimensionError);
  const Tensor t({2, 3}, {1, 2, 3, 4, 5, 6});
  CHECK(t.at(1, 2) == 6.0);
  CHECK(t.size() == 6);
  CHECK(shape_string(t.shape()) == "[2x3]");
}

TEST_CASE("matmul matches a hand-computed product") {
  const Tensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  const Tensor b({3, 2}, {7, 8, 9, 10, 11, 12});
  const Tensor c = matmul(a, b);
  CHECK(c.shape() == Shape{2, 2});
  CHECK(c.values()[0] == 58.0);
  CHECK(c.values()[1] == 64.0);
  CHECK(c.values()[2] == 139.0);
  CHECK(c.values()[3] == 154.0);
  CHECK_THROWS_AS(matmul(a, a), DimensionError);
}

TEST_CASE("activation ranges hold on random and extreme inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Tensor x = random_tensor(rng, {3, 1 + rng.below(7)}, -40.0, 40.0);
    const Tensor s = softmax_last_dim(x);
    const std::size_t cols = x.dim(1);
    for (std::size_t r = 0; r < 3; ++r) {
      double total = 0.0;
      for (std::size_t c = 0; c < cols; ++c) total += s.at(r, c);
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
    for (double v : values_of(relu(x))) CHECK(v >= 0.0);
  }
  const Tensor extremes({4}, {-700.0, -30.0, 30.0, 700.0});
  // At +-700 the result saturates to the closed interval; at +-30 it is still strictly inside.
  const auto sig = values_of(sigmoid(extremes));
  for (double v : sig) CHECK((v >= 0.0 && v <= 1.0));
  CHECK((sig[1] > 0.0 && sig[2] < 1.0));
  for (double v : values_of(softmax_last_dim(Tensor({3}, {1000.0, 0.0, -1000.0})))) CHECK(std::isfinite(v));
}

TEST_CASE("conv1d output length is T - w + 1 and matches a window-sum oracle") {
  Rng rng(5);
  for (std::size_t t = 1; t <= 9; ++t) {
    for (std::size_t w = 1; w <= t; ++w) {
      const std::size_t c_in = 1 + rng.below(3), c_out = 1 + rng.below(3);
      const Tensor x = random_tensor(rng, {t, c_in});
      const Tensor k = random_tensor(rng, {w, c_in, c_out});
      const Tensor b = random_tensor(rng, {c_out});
      const Tensor y = conv1d(x, k, b);
      REQUIRE(y.shape() == Shape{t - w + 1, c_out});
      for (std::size_t p = 0; p + w <= t; ++p) {
        for (std::size_t o = 0; o < c_out; ++o) {
          double expect = b[o];
          for (std::size_t i = 0; i < w; ++i) {
            for (std::size_t c = 0; c < c_in; ++c) expect += x.at(p + i, c) * k[(i * c_in + c) * c_out + o];
          }
          CHECK(y.at(p, o) == doctest::Approx(expect).epsilon(1e-12));
        }
      }
    }
  }
  CHECK_THROWS_AS(conv1d(Tensor({3, 1}), Tensor({4, 1, 1}), Tensor({1})), ConfigError);
}

TEST_CASE("smooth_l1 follows the delta = 1 convention") {
  const Tensor x({5}, {-3.0, -1.0, 0.0, 0.5, 2.0});
  const Tensor y = smooth_l1(x);
  CHECK(y[0] == doctest::Approx(2.5));
  CHECK(y[1] == doctest::Approx(0.5));
  CHECK(y[2] == 0.0);
  CHECK(y[3] == doctest::Approx(0.125));
  CHECK(y[4] == doctest::Approx(1.5));
}

TEST_CASE("binary cross-entropy gradient is flat inside the clamp") {
  const Tensor r = Tensor::parameter({3}, {1e-9, 0.5, 1.0 - 1e-9});
  GradTape tape;
  {
    TapeScope scope(tape);
    const Tensor loss = binary_cross_entropy(r, std::vector<double>{1.0, 0.25, 0.0});
    CHECK(std::isfinite(loss.item()));
    backward(loss);
  }
  const auto g = grad_of(r);
  CHECK(g[0] == 0.0);
  CHECK(g[2] == 0.0);
  // (r - y) / (K r (1 - r)) at r = 0.5
  CHECK(g[1] == doctest::Approx((0.5 - 0.25) / (3 * 0.25)));
}

TEST_CASE("backward requires an active tape and clears it afterwards") {
  const Tensor w = Tensor::parameter({1}, {2.0});
  CHECK_THROWS_AS(backward(mul(w, w)), UsageError);
  GradTape tape;
  TapeScope scope(tape);
  const Tensor loss = mul(w, w);
  CHECK(tape.size() > 0);
  tape.backward(loss);
  CHECK(tape.size() == 0);
  CHECK(w.grad()[0] == doctest::Approx(4.0));
}

TEST_CASE("operations outside a tape produce constants") {
  const Tensor w = Tensor::parameter({2}, {1.0, 2.0});
  const Tensor y = scale(w, 3.0);
  CHECK_FALSE(y.requires_grad());
  CHECK(y[1] == 6.0);
}

TEST_CASE("GRU state stays within max(|h_prev|, 1)") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d_in = 1 + rng.below(4), d_h = 1 + rng.below(4);
    const GruParams p{random_tensor(rng, {d_in, 3 * d_h}, -4, 4), random_tensor(rng, {d_h, 3 * d_h}, -4, 4),
                      random_tensor(rng, {3 * d_h}, -4, 4)};
    const Tensor x = random_tensor(rng, {d_in}, -10, 10);
    const Tensor h = random_tensor(rng, {d_h}, -3, 3);
    const Tensor out = gru_cell(x, h, p);
    for (std::size_t j = 0; j < d_h; ++j) {
      CHECK(std::abs(out[j]) <= std::max(std::abs(h[j]), 1.0) + 1e-15);
    }
  }
}

TEST_CASE("fused gru_sequence agrees with stepping gru_cell, values and gradients") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t t = 1 + rng.below(5), d_in = 1 + rng.below(3), d_h = 1 + rng.below(3);
    const bool reverse = trial % 2 == 1;
    const GruParams p{random_parameter(rng, {d_in, 3 * d_h}), random_parameter(rng, {d_h, 3 * d_h}),
                      random_parameter(rng, {3 * d_h})};
    const Tensor x = random_tensor(rng, {t, d_in});
    const Tensor probe = random_tensor(rng, {t, d_h});

    auto stepped = [&] {
      std::vector<Tensor> rows(t);
      Tensor h(Shape{d_h});
      for (std::size_t s = 0; s < t; ++s) {
        const std::size_t i = reverse ? t - 1 - s : s;
        h = gru_cell(reshape(slice_cols(reshape(x, {1, t * d_in}), i * d_in, (i + 1) * d_in), {d_in}), h, p);
        rows[i] = reshape(h, {1, d_h});
      }
      return concat(rows, 0);
    };

    std::vector<std::vector<double>> grads_fused, grads_stepped;
    Tensor fused_out, stepped_out;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Tensor* w : {&p.input_weights, &p.recurrent_weights, &p.bias}) Tensor(*w).zero_grad();
      GradTape tape;
      TapeScope scope(tape);
      const Tensor y = pass == 0 ? gru_sequence(x, p, reverse) : stepped();
      tape.backward(sum(mul(y, probe)));
      auto& dst = pass == 0 ? grads_fused : grads_stepped;
      for (const Tensor* w : {&p.input_weights, &p.recurrent_weights, &p.bias}) dst.push_back(grad_of(*w));
      (pass == 0 ? fused_out : stepped_out) = y.detach();
    }
    for (std::size_t i = 0; i < fused_out.size(); ++i) {
      CHECK(fused_out[i] == doctest::Approx(stepped_out[i]).epsilon(1e-12));
    }
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t i = 0; i < grads_fused[k].size(); ++i) {
        CHECK(grads_fused[k][i] == doctest::Approx(grads_stepped[k][i]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("finite_diff_check reference cases") {
  const Tensor w = Tensor::parameter({1}, {3.0});
  GradCheckOptions opts;
  auto square = finite_diff_check([&] { return mul(w, w); }, {{"w", w}}, opts);
  REQUIRE(square.entries.size() == 1);
  CHECK(square.entries[0].analytic == doctest::Approx(6.0));
  CHECK(square.entries[0].numeric == doctest::Approx(6.0));
  CHECK(std::abs(square.entries[0].analytic - square.entries[0].numeric) / 6.0 < 1e-6);
  CHECK(square.passed);

  auto constant = finite_diff_check([&] { return add(scale(w, 0.0), Tensor::scalar(5.0)); }, {{"w", w}}, opts);
  CHECK(constant.passed);
  CHECK(constant.entries[0].analytic == 0.0);
  CHECK(constant.entries[0].absolute);

  auto tiny = finite_diff_check([&] { return scale(w, 1e-14); }, {{"w", w}}, opts);
  CHECK(tiny.entries[0].absolute);
  CHECK(tiny.passed);

  auto nan = finite_diff_check([&] { return scale(w, std::numeric_limits<double>::quiet_NaN()); }, {{"w", w}}, opts);
  CHECK_FALSE(nan.passed);
  CHECK_FALSE(nan.error.empty());
}

TEST_CASE("finite_diff_check catches a wrong gradient rule") {
  const Tensor w = Tensor::parameter({3}, {0.3, -1.2, 2.0});
  auto broken_square = [&] {
    std::vector<double> out(3);
    for (std::size_t i = 0; i < 3; ++i) out[i] = w[i] * w[i];
    return sum(make_result({3}, out, {w}, [](detail::Node& self) {
      auto& g = self.parents[0]->grad_buffer();
      for (std::size_t i = 0; i < 3; ++i) g[i] += self.grad[i] * self.parents[0]->value[i];  // missing factor 2
    }));
  };
  const auto report = finite_diff_check(broken_square, {{"w", w}}, {});
  CHECK_FALSE(report.passed);
  CHECK(report.failures == 3);
}

TEST_CASE("gradient suite passes and covers at least 100 randomized op instances") {
  const auto cases = run_gradcheck_suite(3);
  std::size_t op_cases = 0;
  bool has_full_model = false;
  for (const auto& c : cases) {
    INFO(c.name);
    CHECK(c.report.passed);
    CHECK_FALSE(c.report.entries.empty());
    if (c.name == "full_model") {
      has_full_model = true;
    } else {
      ++op_cases;
    }
  }
  CHECK(op_cases >= 100);
  CHECK(has_full_model);
}

TEST_CASE("identical seeds give bit-identical outputs and gradients") {
  auto run = [] {
    Rng rng(99);
    const GruParams p{random_parameter(rng, {3, 6}), random_parameter(rng, {2, 6}), random_parameter(rng, {6})};
    const Tensor x = random_tensor(rng, {4, 3});
    GradTape tape;
    TapeScope scope(tape);
    const Tensor y = gru_sequence(x, p, false);
    std::vector<double> out(y.values().begin(), y.values().end());
    tape.backward(sum(tanh(y)));
    for (double g : p.input_weights.grad()) out.push_back(g);
    for (double g : p.recurrent_weights.grad()) out.push_back(g);
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("rng streams are reproducible and label-separated") {
  Rng a = Rng::derive(1, "alpha"), b = Rng::derive(1, "alpha"), c = Rng::derive(1, "beta");
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  Rng u(4);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(u.below(7) < 7);
  }
  std::vector<int> items{1, 2, 3, 4, 5, 6};
  Rng s(2);
  s.shuffle(items);
  std::vector<int> sorted = items;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{1, 2, 3, 4, 5, 6});
}
