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

// Python bindings: the CLI entry point plus the pure helpers that are handy
// from notebooks (metrics, candidate geometry, configs, gradient checks).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hdrr/cli.hpp"
#include "hdrr/config.hpp"
#include "hdrr/error.hpp"
#include "hdrr/gradcheck.hpp"
#include "hdrr/localizer.hpp"
#include "hdrr/metrics.hpp"
#include "hdrr/params.hpp"
#include "hdrr/synth.hpp"

namespace py = pybind11;

namespace {

using Pair = std::pair<double, double>;

hdrr::Interval to_interval(const Pair& p) { return {p.first, p.second}; }

hdrr::RunConfig parse_config(const std::string& text) {
  return hdrr::config_from_json(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(hdrr, m) {
  m.doc() = "Hierarchical moment localization: CLI and helpers";

  auto base = py::register_exception<hdrr::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<hdrr::DimensionError>(m, "DimensionError", base);
  py::register_exception<hdrr::ConfigError>(m, "ConfigError", base);
  py::register_exception<hdrr::FormatError>(m, "FormatError", base);
  py::register_exception<hdrr::ValidationError>(m, "ValidationError", base);
  py::register_exception<hdrr::NumericalError>(m, "NumericalError", base);
  py::register_exception<hdrr::TrainingError>(m, "TrainingError", base);
  py::register_exception<hdrr::EvaluationError>(m, "EvaluationError", base);
  py::register_exception<hdrr::UsageError>(m, "UsageError", base);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"hdrr"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int status = 0;
        {
          py::gil_scoped_release release;
          status = hdrr::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return std::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"), "Run the hdrr command line in-process; returns (status, stdout, stderr).");

  m.def(
      "interval_iou", [](const Pair& a, const Pair& b) { return hdrr::interval_iou(to_interval(a), to_interval(b)); },
      py::arg("a"), py::arg("b"));

  m.def(
      "recall_at",
      [](const std::vector<std::vector<Pair>>& predictions, const std::vector<Pair>& truths, std::size_t m,
         double n) {
        std::vector<std::vector<hdrr::Interval>> preds;
        for (const auto& list : predictions) {
          auto& out = preds.emplace_back();
          for (const auto& p : list) out.push_back(to_interval(p));
        }
        std::vector<hdrr::Interval> gts;
        for (const auto& t : truths) gts.push_back(to_interval(t));
        return hdrr::recall_at(preds, gts, m, n);
      },
      py::arg("predictions"), py::arg("truths"), py::arg("m"), py::arg("n"));

  m.def(
      "enumerate_candidates",
      [](std::size_t units, const std::vector<std::size_t>& sizes) {
        std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
        for (const auto& c : hdrr::enumerate_candidates(units, sizes)) out.emplace_back(c.start, c.end, c.width);
        return out;
      },
      py::arg("units"), py::arg("filter_sizes"), "Candidate (start, end, width) triples in unit coordinates.");

  m.def(
      "synthetic_config", [] { return hdrr::to_json(hdrr::synthetic_config()).dump(); },
      "Configuration used for the synthetic dataset, as a JSON string.");

  m.def(
      "parameter_count",
      [](const std::string& config_json) {
        const hdrr::RunConfig c = parse_config(config_json);
        return hdrr::ModelParams::create(c, c.seed).parameter_count();
      },
      py::arg("config_json"));

  m.def(
      "gradcheck",
      [](std::uint64_t seed) {
        std::vector<std::tuple<std::string, bool, double>> out;
        for (const auto& c : hdrr::run_gradcheck_suite(seed)) {
          out.emplace_back(c.name, c.report.passed, c.report.max_rel_error);
        }
        return out;
      },
      py::arg("seed") = 1, "Finite-difference check of every op; returns (case, passed, max relative error).");

  m.attr("EXIT_OK") = hdrr::kExitOk;
  m.attr("EXIT_FAILURE") = hdrr::kExitFailure;
  m.attr("EXIT_USAGE") = hdrr::kExitUsage;
}
