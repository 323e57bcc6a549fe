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

#include "hdrr/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hdrr {

GradCheckReport finite_diff_check(const std::function<Tensor()>& loss_fn,
                                  std::vector<NamedTensor> params, const GradCheckOptions& options) {
  GradCheckReport report;
  for (auto& p : params) p.tensor.zero_grad();

  double base = 0.0;
  {
    GradTape tape;
    TapeScope scope(tape);
    const Tensor loss = loss_fn();
    base = loss.item();
    if (std::isfinite(base)) tape.backward(loss);
  }
  if (!std::isfinite(base)) {
    report.passed = false;
    report.error = "loss is not finite at the base point";
    return report;
  }

  for (auto& p : params) {
    std::vector<double> analytic(p.tensor.size(), 0.0);
    auto g = p.tensor.grad();
    std::copy(g.begin(), g.end(), analytic.begin());
    auto values = p.tensor.mutable_values();
    const std::size_t n = values.size();
    const std::size_t stride =
        options.max_entries == 0 || n <= options.max_entries ? 1 : (n + options.max_entries - 1) / options.max_entries;
    for (std::size_t i = 0; i < n; i += stride) {
      const double original = values[i];
      values[i] = original + options.step;
      const double up = loss_fn().item();
      values[i] = original - options.step;
      const double down = loss_fn().item();
      values[i] = original;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        std::ostringstream msg;
        msg << "loss is not finite when perturbing " << p.name << "[" << i << "]";
        report.passed = false;
        report.error = msg.str();
        return report;
      }
      GradCheckEntry e;
      e.name = p.name;
      e.index = i;
      e.analytic = analytic[i];
      e.numeric = (up - down) / (2.0 * options.step);
      const double abs_err = std::abs(e.analytic - e.numeric);
      const double scale = std::max(std::abs(e.analytic), std::abs(e.numeric));
      double rel_err = 0.0;
      if (scale < options.zero_floor) {
        e.absolute = true;
        e.error = abs_err;
      } else {
        rel_err = abs_err / scale;
        e.error = rel_err;
      }
      e.pass = abs_err <= options.abs_tol || (!e.absolute && rel_err <= options.rel_tol);
      // Entries within the absolute tolerance do not count toward the
      // reported worst relative error.
      if (!e.absolute && abs_err > options.abs_tol) {
        report.max_rel_error = std::max(report.max_rel_error, rel_err);
      }
      report.max_abs_error = std::max(report.max_abs_error, abs_err);
      if (!e.pass) ++report.failures;
      report.entries.push_back(std::move(e));
    }
  }
  report.passed = report.failures == 0;
  return report;
}

}  // namespace hdrr
