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

#include "hdrr/adam.hpp"

#include <cmath>

#include "hdrr/error.hpp"

namespace hdrr {

AdamState::AdamState(std::span<const NamedTensor> params, double lr) : learning_rate(lr) {
  for (const auto& p : params) {
    first_moment.emplace_back(p.tensor.size(), 0.0);
    second_moment.emplace_back(p.tensor.size(), 0.0);
  }
}

void adam_step(std::span<NamedTensor> params, std::span<const std::vector<double>> grads, AdamState& state) {
  if (grads.size() != params.size() || state.first_moment.size() != params.size()) {
    throw TrainingError("adam_step: parameter, gradient and state counts differ");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& g = grads[i];
    if (!g.empty() && g.size() != params[i].tensor.size()) {
      throw TrainingError("adam_step: gradient for " + params[i].name + " has the wrong size");
    }
    for (double v : g) {
      if (!std::isfinite(v)) throw TrainingError("non-finite gradient for parameter " + params[i].name);
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto values = params[i].tensor.mutable_values();
    auto& m = state.first_moment[i];
    auto& v = state.second_moment[i];
    const auto& g = grads[i];
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double gj = g.empty() ? 0.0 : g[j];
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * gj;
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * gj * gj;
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      values[j] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

}  // namespace hdrr
