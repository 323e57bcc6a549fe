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

#include "hdrr/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdrr/checkpoint.hpp"
#include "hdrr/config.hpp"
#include "hdrr/dataset.hpp"
#include "hdrr/error.hpp"
#include "hdrr/gradcheck.hpp"
#include "hdrr/model.hpp"
#include "hdrr/synth.hpp"
#include "hdrr/trainer.hpp"

namespace hdrr {
namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::string manifest;
  std::string checkpoint;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t top_m = 1;
  std::string record_id;
  std::size_t n = 32;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

RunConfig config_for(const Flags& f) {
  RunConfig c = load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  return c;
}

const DatasetRecord& find_record(const std::vector<DatasetRecord>& records, const std::string& id,
                                 const std::string& manifest) {
  auto it = std::find_if(records.begin(), records.end(), [&](const DatasetRecord& r) { return r.id == id; });
  if (it == records.end()) throw Error("record '" + id + "' is not in " + manifest);
  return *it;
}

int cmd_synth(const Flags& f, std::ostream& out) {
  RunConfig c = f.config.empty() ? synthetic_config() : load_config(f.config);
  const std::uint64_t seed = f.seed.value_or(1);
  c.validate();
  const SyntheticDataset data = generate_synthetic(seed, f.n, c);
  const fs::path dir(f.out);
  write_synthetic(data, dir);
  save_config(c, dir / "config.json");
  out << "wrote " << data.records.size() << " records to " << (dir / "manifest.jsonl").string() << "\n";
  return kExitOk;
}

int cmd_train(const Flags& f, std::ostream& out, std::ostream& err) {
  const RunConfig c = config_for(f);
  c.validate();
  const auto samples = prepare_samples(load_manifest(f.manifest), c);
  const fs::path dir(f.out);
  ensure_dir(dir);
  std::ofstream log = open_output(dir / "metrics.jsonl");
  TrainOptions options;
  options.threads = threads_from_env();
  options.on_epoch = [&](const EpochLog& e) {
    log << epoch_log_json(e) << "\n";
    log.flush();
    err << "epoch " << e.epoch << "/" << c.epochs << " loss " << e.total << "\n";
  };
  const TrainResult result = train(samples, c, options);
  save_checkpoint(result.params, dir / "model.ckpt");
  save_config(c, dir / "config.json");
  out << "trained on " << result.split.train << " records (" << result.split.heldout << " held out); wrote "
      << (dir / "model.ckpt").string() << "\n";
  return kExitOk;
}

int cmd_eval(const Flags& f, std::ostream& out) {
  const RunConfig c = config_for(f);
  const ModelParams params = load_checkpoint(f.checkpoint, c);
  const auto samples = prepare_samples(load_manifest(f.manifest), c);
  const Evaluation e = evaluate(params, samples, f.top_m, threads_from_env());
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(metric_report_json(e.metrics));
  doc["L_aln"] = e.mean_loss.alignment;
  doc["L_reg"] = e.mean_loss.regression;
  doc["L_total"] = e.mean_loss.total;
  out << doc.dump(2) << "\n";
  return kExitOk;
}

struct SingleRecord {
  RunConfig config;
  ModelParams params;
  Sample sample;
  ModelOutput output;
  std::vector<Candidate> candidates;
};

SingleRecord run_single(const Flags& f) {
  const RunConfig c = config_for(f);
  ModelParams params = load_checkpoint(f.checkpoint, c);
  const auto records = load_manifest(f.manifest);
  const DatasetRecord& record = find_record(records, f.record_id, f.manifest);
  Sample sample = prepare_sample(record, c, make_embedding_table(c));
  ModelOutput output = forward(params, sample.query, sample.video);
  return {c, std::move(params), std::move(sample), std::move(output), model_candidates(c)};
}

int cmd_localize(const Flags& f, std::ostream& out) {
  const SingleRecord r = run_single(f);
  const auto spans = refined_spans(r.output, r.candidates, r.config.units);
  const auto moments = localize(r.output.scores.values(), spans, r.sample.duration, r.config.units, f.top_m);
  nlohmann::ordered_json doc;
  doc["id"] = r.sample.id;
  doc["duration"] = r.sample.duration;
  doc["moments"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < moments.size(); ++i) {
    const auto& m = moments[i];
    const Candidate& cand = r.candidates[m.candidate];
    doc["moments"].push_back({{"rank", i + 1},
                              {"start", m.seconds.start},
                              {"end", m.seconds.end},
                              {"score", m.score},
                              {"candidate", m.candidate},
                              {"t_s", cand.start},
                              {"t_e", cand.end}});
  }
  out << doc.dump(2) << "\n";
  return kExitOk;
}

void write_scores_csv(const SingleRecord& r, std::ostream& csv) {
  const auto spans = refined_spans(r.output, r.candidates, r.config.units);
  csv << "k,t_s,t_e,scale,r_g,r_a,r_o,r,d_s,d_e,xi_s_sec,xi_e_sec\n";
  csv << std::setprecision(17);
  for (std::size_t k = 0; k < r.candidates.size(); ++k) {
    const Candidate& cand = r.candidates[k];
    const Interval sec = units_to_seconds(spans[k], r.sample.duration, r.config.units);
    csv << k << "," << cand.start << "," << cand.end << "," << cand.width;
    for (const Tensor& level : r.output.level_scores) {
      csv << ",";
      if (level.defined()) csv << level[k];  // empty for disabled levels
    }
    csv << "," << r.output.scores[k] << "," << r.output.offset_start[k] << "," << r.output.offset_end[k] << ","
        << sec.start << "," << sec.end << "\n";
  }
}

int cmd_scores(const Flags& f, std::ostream& out) {
  const SingleRecord r = run_single(f);
  if (f.out.empty()) {
    write_scores_csv(r, out);
    return kExitOk;
  }
  const fs::path dir(f.out);
  ensure_dir(dir);
  const fs::path path = dir / (r.sample.id + ".scores.csv");
  std::ofstream csv = open_output(path);
  write_scores_csv(r, csv);
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_gradcheck(const Flags& f, std::ostream& out) {
  const auto cases = run_gradcheck_suite(f.seed.value_or(1));
  std::size_t failed = 0;
  double worst = 0.0;
  for (const auto& c : cases) {
    worst = std::max(worst, c.report.max_rel_error);
    if (c.report.passed) continue;
    ++failed;
    out << "FAIL " << c.name;
    if (!c.report.error.empty()) out << ": " << c.report.error;
    for (const auto& e : c.report.entries) {
      if (!e.pass) {
        out << "\n  " << e.name << "[" << e.index << "] analytic " << e.analytic << " numeric " << e.numeric;
      }
    }
    out << "\n";
  }
  out << "gradcheck: " << cases.size() << " cases, " << failed << " failed, max relative error " << worst << "\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal moment localization with hierarchical residual reasoning", "hdrr"};
  app.require_subcommand(1);
  Flags f;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--seed", f.seed, "Generator seed (default 1)");
  synth->add_option("--n", f.n, "Number of records")->check(CLI::PositiveNumber);
  synth->add_option("--out", f.out, "Output directory")->required();
  synth->add_option("--config", f.config, "Config JSON (defaults to the synthetic settings)");

  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--config", f.config, "Config JSON")->required();
  train_cmd->add_option("--manifest", f.manifest, "Dataset manifest (JSON Lines)")->required();
  train_cmd->add_option("--out", f.out, "Output directory for model.ckpt and metrics.jsonl")->required();
  train_cmd->add_option("--seed", f.seed, "Override the config seed");

  auto* eval_cmd = app.add_subcommand("eval", "Report R@m,IoU@n as JSON");
  auto* localize_cmd = app.add_subcommand("localize", "Print the top-m moments for one record");
  auto* scores_cmd = app.add_subcommand("scores", "Write per-candidate scores as CSV");
  for (auto* cmd : {eval_cmd, localize_cmd, scores_cmd}) {
    cmd->add_option("--config", f.config, "Config JSON")->required();
    cmd->add_option("--checkpoint", f.checkpoint, "Model checkpoint")->required();
    cmd->add_option("--manifest", f.manifest, "Dataset manifest (JSON Lines)")->required();
  }
  for (auto* cmd : {eval_cmd, localize_cmd}) {
    cmd->add_option("--top-m", f.top_m, "Predictions per record")->check(CLI::PositiveNumber);
  }
  for (auto* cmd : {localize_cmd, scores_cmd}) {
    cmd->add_option("--record-id", f.record_id, "Record id")->required();
  }
  scores_cmd->add_option("--out", f.out, "Directory for <id>.scores.csv (default: stdout)");

  auto* grad_cmd = app.add_subcommand("gradcheck", "Run the finite-difference gradient suite");
  grad_cmd->add_option("--seed", f.seed, "Suite seed (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hdrr: " << e.what() << "\n";
    const auto used = app.get_subcommands();
    err << (used.empty() ? app.help() : used.front()->help());
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "synth") return cmd_synth(f, out);
    if (name == "train") return cmd_train(f, out, err);
    if (name == "eval") return cmd_eval(f, out);
    if (name == "localize") return cmd_localize(f, out);
    if (name == "scores") return cmd_scores(f, out);
    return cmd_gradcheck(f, out);
  } catch (const std::exception& e) {
    err << "hdrr " << name << ": error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace hdrr
