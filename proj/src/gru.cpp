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

#include "hdrr/gru.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "hdrr/error.hpp"
#include "hdrr/ops.hpp"

namespace hdrr {
namespace {

void check_params(const GruParams& p, std::size_t d_in) {
  const std::size_t d_h = p.recurrent_weights.rank() == 2 ? p.recurrent_weights.dim(0) : 0;
  const bool ok = p.input_weights.rank() == 2 && p.recurrent_weights.rank() == 2 &&
                  p.input_weights.dim(0) == d_in && p.input_weights.dim(1) == 3 * d_h &&
                  p.recurrent_weights.dim(1) == 3 * d_h && p.bias.size() == 3 * d_h;
  if (!ok) {
    throw DimensionError("gru: parameters " + shape_string(p.input_weights.shape()) + ", " +
                         shape_string(p.recurrent_weights.shape()) + ", " +
                         shape_string(p.bias.shape()) + " do not fit input size " +
                         std::to_string(d_in));
  }
}

inline double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tensor gru_cell(const Tensor& x, const Tensor& h_prev, const GruParams& params) {
  if (x.rank() != 1 || h_prev.rank() != 1) {
    throw DimensionError("gru_cell expects vectors, got " + shape_string(x.shape()) + " and " +
                         shape_string(h_prev.shape()));
  }
  check_params(params, x.size());
  const std::size_t d_h = params.hidden_size();
  if (h_prev.size() != d_h) {
    throw DimensionError("gru_cell: state " + shape_string(h_prev.shape()) + " does not match hidden size " +
                         std::to_string(d_h));
  }
  const Tensor xr = reshape(x, {1, x.size()});
  const Tensor hr = reshape(h_prev, {1, d_h});
  const Tensor gx = add(matmul(xr, params.input_weights), params.bias);
  const Tensor u_zr = slice_cols(params.recurrent_weights, 0, 2 * d_h);
  const Tensor u_n = slice_cols(params.recurrent_weights, 2 * d_h, 3 * d_h);
  const Tensor gh = matmul(hr, u_zr);
  const Tensor z = sigmoid(add(slice_cols(gx, 0, d_h), slice_cols(gh, 0, d_h)));
  const Tensor r = sigmoid(add(slice_cols(gx, d_h, 2 * d_h), slice_cols(gh, d_h, 2 * d_h)));
  const Tensor n = tanh(add(slice_cols(gx, 2 * d_h, 3 * d_h), matmul(mul(r, hr), u_n)));
  // h' = h + z (n - h)
  const Tensor h = add(hr, mul(z, sub(n, hr)));
  return reshape(h, {d_h});
}

Tensor gru_sequence(const Tensor& inputs, const GruParams& params, bool reverse) {
  if (inputs.rank() != 2) {
    throw DimensionError("gru_sequence expects [T x d_in], got " + shape_string(inputs.shape()));
  }
  const std::size_t steps = inputs.dim(0), d_in = inputs.dim(1);
  check_params(params, d_in);
  const std::size_t d_h = params.hidden_size();
  const std::size_t g3 = 3 * d_h;

  auto x = inputs.values();
  auto w = params.input_weights.values();
  auto u = params.recurrent_weights.values();
  auto b = params.bias.values();

  // Per-step caches for the backward pass, indexed by position t.
  std::vector<double> hidden(steps * d_h);
  std::vector<double> gates(steps * g3);  // z | r | n
  std::vector<double> pre(g3);
  std::vector<double> rec(2 * d_h);
  std::vector<double> rh(d_h);
  std::vector<double> zero(d_h, 0.0);

  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = reverse ? steps - 1 - s : s;
    const double* h_prev = s == 0 ? zero.data() : &hidden[(reverse ? t + 1 : t - 1) * d_h];
    const double* xt = &x[t * d_in];
    for (std::size_t j = 0; j < g3; ++j) pre[j] = b[j];
    for (std::size_t i = 0; i < d_in; ++i) {
      const double xv = xt[i];
      if (xv == 0.0) continue;
      const double* wr = &w[i * g3];
      for (std::size_t j = 0; j < g3; ++j) pre[j] += xv * wr[j];
    }
    std::fill(rec.begin(), rec.end(), 0.0);
    for (std::size_t i = 0; i < d_h; ++i) {
      const double hv = h_prev[i];
      if (hv == 0.0) continue;
      const double* ur = &u[i * g3];
      for (std::size_t j = 0; j < 2 * d_h; ++j) rec[j] += hv * ur[j];
    }
    double* zt = &gates[t * g3];
    double* rt = zt + d_h;
    double* nt = zt + 2 * d_h;
    for (std::size_t j = 0; j < d_h; ++j) {
      zt[j] = logistic(pre[j] + rec[j]);
      rt[j] = logistic(pre[d_h + j] + rec[d_h + j]);
      rh[j] = rt[j] * h_prev[j];
    }
    for (std::size_t j = 0; j < d_h; ++j) {
      double acc = pre[2 * d_h + j];
      for (std::size_t i = 0; i < d_h; ++i) acc += rh[i] * u[i * g3 + 2 * d_h + j];
      nt[j] = std::tanh(acc);
    }
    double* ht = &hidden[t * d_h];
    for (std::size_t j = 0; j < d_h; ++j) ht[j] = h_prev[j] + zt[j] * (nt[j] - h_prev[j]);
  }

  auto rule = [steps, d_in, d_h, g3, reverse, gates = std::move(gates)](detail::Node& self) {
    const auto& x = self.parents[0]->value;
    const auto& w = self.parents[1]->value;
    const auto& u = self.parents[2]->value;
    const auto& hidden = self.value;
    auto grad_of = [&self](std::size_t i) -> std::vector<double>* {
      auto& p = *self.parents[i];
      return p.requires_grad ? &p.grad_buffer() : nullptr;
    };
    auto* gx = grad_of(0);
    auto* gw = grad_of(1);
    auto* gu = grad_of(2);
    auto* gb = grad_of(3);

    std::vector<double> dh(d_h, 0.0);  // gradient flowing into the state at the current step
    std::vector<double> dpre(g3);
    std::vector<double> drh(d_h);
    std::vector<double> rh(d_h);
    std::vector<double> dh_prev(d_h);
    std::vector<double> zero(d_h, 0.0);

    for (std::size_t s = steps; s-- > 0;) {
      const std::size_t t = reverse ? steps - 1 - s : s;
      const double* h_prev = s == 0 ? zero.data() : &hidden[(reverse ? t + 1 : t - 1) * d_h];
      const double* zt = &gates[t * g3];
      const double* rt = zt + d_h;
      const double* nt = zt + 2 * d_h;
      for (std::size_t j = 0; j < d_h; ++j) dh[j] += self.grad[t * d_h + j];

      for (std::size_t j = 0; j < d_h; ++j) {
        const double dn = dh[j] * zt[j];
        const double dz = dh[j] * (nt[j] - h_prev[j]);
        dpre[2 * d_h + j] = dn * (1.0 - nt[j] * nt[j]);
        dpre[j] = dz * zt[j] * (1.0 - zt[j]);
        dh_prev[j] = dh[j] * (1.0 - zt[j]);
        rh[j] = rt[j] * h_prev[j];
      }
      // Candidate path through (r * h) U_n.
      for (std::size_t i = 0; i < d_h; ++i) {
        double acc = 0.0;
        const double* ur = &u[i * g3 + 2 * d_h];
        for (std::size_t j = 0; j < d_h; ++j) acc += dpre[2 * d_h + j] * ur[j];
        drh[i] = acc;
      }
      for (std::size_t i = 0; i < d_h; ++i) {
        dpre[d_h + i] = drh[i] * h_prev[i] * rt[i] * (1.0 - rt[i]);
        dh_prev[i] += drh[i] * rt[i];
      }
      if (gu) {
        for (std::size_t i = 0; i < d_h; ++i) {
          double* row = &(*gu)[i * g3];
          const double hv = h_prev[i];
          for (std::size_t j = 0; j < 2 * d_h; ++j) row[j] += hv * dpre[j];
          const double rv = rh[i];
          for (std::size_t j = 0; j < d_h; ++j) row[2 * d_h + j] += rv * dpre[2 * d_h + j];
        }
      }
      // Gate path through h U_zr.
      for (std::size_t i = 0; i < d_h; ++i) {
        const double* ur = &u[i * g3];
        double acc = 0.0;
        for (std::size_t j = 0; j < 2 * d_h; ++j) acc += dpre[j] * ur[j];
        dh_prev[i] += acc;
      }
      const double* xt = &x[t * d_in];
      if (gw) {
        for (std::size_t i = 0; i < d_in; ++i) {
          const double xv = xt[i];
          if (xv == 0.0) continue;
          double* row = &(*gw)[i * g3];
          for (std::size_t j = 0; j < g3; ++j) row[j] += xv * dpre[j];
        }
      }
      if (gb) {
        for (std::size_t j = 0; j < g3; ++j) (*gb)[j] += dpre[j];
      }
      if (gx) {
        for (std::size_t i = 0; i < d_in; ++i) {
          const double* wr = &w[i * g3];
          double acc = 0.0;
          for (std::size_t j = 0; j < g3; ++j) acc += dpre[j] * wr[j];
          (*gx)[t * d_in + i] += acc;
        }
      }
      dh.swap(dh_prev);
    }
  };
  return make_result({steps, d_h}, std::move(hidden),
                     {inputs, params.input_weights, params.recurrent_weights, params.bias},
                     std::move(rule));
}

Tensor bigru(const Tensor& inputs, const BiGruParams& params) {
  const std::array<Tensor, 2> halves = {gru_sequence(inputs, params.forward, false),
                                        gru_sequence(inputs, params.backward, true)};
  return concat_last_dim(halves);
}

}  // namespace hdrr
