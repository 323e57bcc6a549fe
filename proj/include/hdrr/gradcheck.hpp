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

#ifndef HDRR_GRADCHECK_HPP_
#define HDRR_GRADCHECK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hdrr/tensor.hpp"

namespace hdrr {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

struct GradCheckOptions {
  double step = 1e-5;
  double rel_tol = 1e-4;
  // Entries pass when either the relative or the absolute error is within
  // tolerance. Relative error is undefined when both gradients are below
  // `zero_floor`; the absolute error is reported instead.
  double abs_tol = 1e-7;
  double zero_floor = 1e-12;
  // Check at most this many entries per tensor (evenly strided); 0 = all.
  std::size_t max_entries = 0;
};

struct GradCheckEntry {
  std::string name;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double error = 0.0;  // relative unless `absolute`
  bool absolute = false;
  bool pass = true;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t failures = 0;
  bool passed = true;
  std::string error;  // set when the function produced a non-finite value
};

// Compares reverse-mode gradients of `loss_fn` against central differences for
// every entry of `params`. `loss_fn` must build its result from the given
// tensors and be deterministic.
GradCheckReport finite_diff_check(const std::function<Tensor()>& loss_fn,
                                  std::vector<NamedTensor> params, const GradCheckOptions& options);

struct GradCheckCase {
  std::string name;
  GradCheckReport report;
};

// The full verification suite: every differentiable primitive on randomized
// shapes, the composite encoders, and the whole model at tiny dimensions.
std::vector<GradCheckCase> run_gradcheck_suite(std::uint64_t seed);

}  // namespace hdrr

#endif  // HDRR_GRADCHECK_HPP_
