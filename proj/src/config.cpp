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

#include "hdrr/config.hpp"

#include <fstream>
#include <set>

#include "hdrr/error.hpp"

namespace hdrr {
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "L_max",      "T_units",      "d_w",        "d_v",           "d_s",
      "d_f",        "M",            "filter_sizes", "heads",       "learning_rate",
      "batch_size", "epochs",       "alpha",      "seed",          "use_action",
      "use_object", "use_res_bigru", "use_self_attention", "iou_thresholds",
      "embedding_path", "embedding_seed"};
  return keys;
}

template <typename T>
void read(const nlohmann::json& doc, const char* key, T& out) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };
  if (max_query_len == 0) fail("L_max must be positive");
  if (units == 0) fail("T_units must be positive");
  if (word_dim == 0 || feature_dim == 0 || hidden_dim == 0) fail("d_w, d_v and d_s must be positive");
  if (fused_dim != 2 * hidden_dim) {
    fail("d_f must equal 2 * d_s (" + std::to_string(2 * hidden_dim) + "), got " +
         std::to_string(fused_dim));
  }
  if (depth < 1) fail("M must be at least 1");
  if (heads == 0 || hidden_dim % heads != 0) {
    fail("d_s (" + std::to_string(hidden_dim) + ") must be divisible by heads (" +
         std::to_string(heads) + ")");
  }
  if (filter_sizes.empty()) fail("filter_sizes is empty");
  for (std::size_t w : filter_sizes) {
    if (w == 0) fail("filter sizes must be positive");
    if (w > units) {
      fail("filter size " + std::to_string(w) + " exceeds T_units " + std::to_string(units) +
           "; drop it");
    }
  }
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (batch_size == 0) fail("batch_size must be positive");
  if (!(alpha >= 0.0)) fail("alpha must be non-negative");
  for (double n : iou_thresholds) {
    if (!(n >= 0.0 && n < 1.0)) fail("IoU thresholds must lie in [0, 1)");
  }
}

RunConfig activitynet_defaults() {
  RunConfig c;
  c.max_query_len = 50;
  c.units = 200;
  c.feature_dim = 500;
  c.learning_rate = 0.0003;
  c.filter_sizes = {16, 32, 64, 96, 128, 160, 192};
  c.iou_thresholds = {0.3, 0.5, 0.7};
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json doc;
  doc["L_max"] = c.max_query_len;
  doc["T_units"] = c.units;
  doc["d_w"] = c.word_dim;
  doc["d_v"] = c.feature_dim;
  doc["d_s"] = c.hidden_dim;
  doc["d_f"] = c.fused_dim;
  doc["M"] = c.depth;
  doc["filter_sizes"] = c.filter_sizes;
  doc["heads"] = c.heads;
  doc["learning_rate"] = c.learning_rate;
  doc["batch_size"] = c.batch_size;
  doc["epochs"] = c.epochs;
  doc["alpha"] = c.alpha;
  doc["seed"] = c.seed;
  doc["use_action"] = c.ablation.use_action;
  doc["use_object"] = c.ablation.use_object;
  doc["use_res_bigru"] = c.ablation.use_res_bigru;
  doc["use_self_attention"] = c.ablation.use_self_attention;
  doc["iou_thresholds"] = c.iou_thresholds;
  doc["embedding_path"] = c.embedding_path;
  doc["embedding_seed"] = c.embedding_seed;
  return doc;
}

RunConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig c;
  read(doc, "L_max", c.max_query_len);
  read(doc, "T_units", c.units);
  read(doc, "d_w", c.word_dim);
  read(doc, "d_v", c.feature_dim);
  read(doc, "d_s", c.hidden_dim);
  c.fused_dim = 2 * c.hidden_dim;
  read(doc, "d_f", c.fused_dim);
  read(doc, "M", c.depth);
  read(doc, "filter_sizes", c.filter_sizes);
  read(doc, "heads", c.heads);
  read(doc, "learning_rate", c.learning_rate);
  read(doc, "batch_size", c.batch_size);
  read(doc, "epochs", c.epochs);
  read(doc, "alpha", c.alpha);
  read(doc, "seed", c.seed);
  read(doc, "use_action", c.ablation.use_action);
  read(doc, "use_object", c.ablation.use_object);
  read(doc, "use_res_bigru", c.ablation.use_res_bigru);
  read(doc, "use_self_attention", c.ablation.use_self_attention);
  read(doc, "iou_thresholds", c.iou_thresholds);
  read(doc, "embedding_path", c.embedding_path);
  read(doc, "embedding_seed", c.embedding_seed);
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  RunConfig c = config_from_json(doc);
  if (!c.embedding_path.empty()) {
    std::filesystem::path p(c.embedding_path);
    if (p.is_relative()) c.embedding_path = (path.parent_path() / p).string();
  }
  return c;
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config " + path.string());
  out << to_json(config).dump(2) << "\n";
}

}  // namespace hdrr
