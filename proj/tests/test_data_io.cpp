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
#include <cstring>
#include <limits>

#include <nlohmann/json.hpp>

#include "hdrr/config.hpp"
#include "hdrr/dataset.hpp"
#include "hdrr/error.hpp"
#include "hdrr/localizer.hpp"
#include "hdrr/metrics.hpp"
#include "hdrr/synth.hpp"
#include "support.hpp"

using namespace hdrr;
using hdrr::testing::read_bytes;
using hdrr::testing::TempDir;
using hdrr::testing::write_text;

namespace {

const char* kLine =
    R"({"id":"v1","feature_path":"v1.vfea","duration_seconds":30.0,"tokens":["a","woman","holding","a","book"],)"
    R"("action_mask":[0,0,1,0,0],"object_mask":[0,1,0,0,1],"moment":[2.5,10.0]})";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kLine;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

FeatureMatrix ramp(std::size_t units, std::size_t dim) {
  FeatureMatrix f{units, dim, std::vector<double>(units * dim)};
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = static_cast<double>(i) * 0.25;
  return f;
}

}  // namespace

TEST_CASE("manifest loads valid lines in file order and resolves feature paths") {
  TempDir dir("manifest");
  write_text(dir / "m.jsonl", std::string(kLine) + "\n" + with("\"v1\"", "\"v2\"") + "\n\n" +
                                  with("\"v1\"", "\"v3\"") + "\n");
  const auto records = load_manifest(dir / "m.jsonl");
  REQUIRE(records.size() == 3);
  CHECK(records[0].id == "v1");
  CHECK(records[2].id == "v3");
  CHECK(records[0].feature_path == (dir.path() / "v1.vfea").string());
  CHECK(records[0].tokens.size() == 5);
  CHECK(records[0].action_mask[2]);
  CHECK(records[0].moment.end == 10.0);
}

TEST_CASE("manifest round-trips through save_manifest") {
  TempDir dir("manifest_rt");
  write_text(dir / "a.jsonl", std::string(kLine) + "\n");
  auto records = load_manifest(dir / "a.jsonl");
  records[0].feature_path = "v1.vfea";
  save_manifest(records, dir / "b.jsonl");
  CHECK(read_bytes(dir / "b.jsonl") == std::string(kLine) + "\n");
}

TEST_CASE("manifest errors are located") {
  TempDir dir("manifest_err");
  auto expect = [&](const std::string& body, auto type_tag, const std::string& fragment) {
    write_text(dir / "bad.jsonl", body);
    try {
      load_manifest(dir / "bad.jsonl");
      FAIL("expected an error for: " << body);
    } catch (const decltype(type_tag)& e) {
      CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
    }
  };
  expect(std::string(kLine) + "\n{not json\n", FormatError(""), ":2:");
  expect(with("\"moment\":[2.5,10.0]", "\"moment\":[10.0,2.5]"), ValidationError(""), "'v1'");
  expect(with("\"moment\":[2.5,10.0]", "\"moment\":[2.5,31.0]"), ValidationError(""), "'v1'");
  expect(with("[0,0,1,0,0]", "[0,0,1,0]"), ValidationError(""), "'v1'");
  expect(with("\"id\"", "\"name\""), FormatError(""), ":1:");
  expect(with("}", ",\"extra\":1}"), FormatError(""), "extra");
  expect(std::string(kLine) + "\n" + kLine + "\n", ValidationError(""), "duplicate");
  expect(with("\"duration_seconds\":30.0", "\"duration_seconds\":-1"), ValidationError(""), "'v1'");
}

TEST_CASE("feature files round-trip byte-identically") {
  TempDir dir("features");
  write_feature_file(ramp(75, 4), dir / "a.vfea");
  const auto bytes = read_bytes(dir / "a.vfea");
  CHECK(bytes.size() == 12 + 75 * 4 * 4);
  CHECK(bytes.substr(0, 4) == "VFEA");
  CHECK(static_cast<unsigned char>(bytes[4]) == 75);
  write_feature_file(load_features(dir / "a.vfea", 75), dir / "b.vfea");
  CHECK(read_bytes(dir / "b.vfea") == bytes);
}

TEST_CASE("feature loading rejects malformed files") {
  TempDir dir("features_bad");
  write_feature_file(ramp(3, 2), dir / "ok.vfea");
  const std::string good = read_bytes(dir / "ok.vfea");

  write_text(dir / "magic.vfea", "XFEA" + good.substr(4));
  CHECK_THROWS_AS(read_feature_file(dir / "magic.vfea"), FormatError);

  write_text(dir / "short.vfea", good.substr(0, good.size() - 3));
  CHECK_THROWS_AS(read_feature_file(dir / "short.vfea"), FormatError);

  std::string nan = good;
  const float bad = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(nan.data() + 12 + 4 * 3, &bad, 4);
  write_text(dir / "nan.vfea", nan);
  CHECK_THROWS_AS(read_feature_file(dir / "nan.vfea"), FormatError);

  CHECK_THROWS_AS(read_feature_file(dir / "missing.vfea"), FormatError);
}

TEST_CASE("nearest-neighbour resampling selects floor(i * T / units)") {
  const FeatureMatrix f = ramp(150, 2);
  const FeatureMatrix same = resample_units(f, 150);
  CHECK(same.values == f.values);
  const FeatureMatrix half = resample_units(f, 75);
  REQUIRE(half.units == 75);
  for (std::size_t i = 0; i < 75; ++i) {
    const std::size_t src = i * 150 / 75;
    CHECK(half.values[i * 2] == f.values[src * 2]);
    CHECK(half.values[i * 2 + 1] == f.values[src * 2 + 1]);
  }
  const FeatureMatrix up = resample_units(ramp(4, 1), 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(up.values[i] == static_cast<double>(i * 4 / 10) * 0.25);
}

TEST_CASE("embeddings pad, truncate and fall back deterministically") {
  EmbeddingTable table(3, 7);
  table.insert("book", {1.0, 2.0, 3.0});
  const Tensor empty = embed_tokens({}, table, 4);
  for (double v : empty.values()) CHECK(v == 0.0);

  const Tensor e = embed_tokens({"a", "book", "zzz"}, table, 10);
  REQUIRE(e.shape() == Shape{10, 3});
  CHECK(e.at(1, 2) == 3.0);
  for (std::size_t r = 3; r < 10; ++r) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(e.at(r, c) == 0.0);
  }
  const auto oov = table.lookup("zzz");
  CHECK(oov == EmbeddingTable(3, 7).lookup("zzz"));
  CHECK(oov != EmbeddingTable(3, 8).lookup("zzz"));
  for (double v : oov) CHECK(std::abs(v) <= 1.0);

  const Tensor cut = embed_tokens({"book", "book", "book"}, table, 2);
  CHECK(cut.shape() == Shape{2, 3});
}

TEST_CASE("embedding text files load and report bad lines") {
  TempDir dir("emb");
  write_text(dir / "ok.txt", "book 1 2 3\ndoor 0.5 -1 2e-1\n");
  const auto table = EmbeddingTable::load(dir / "ok.txt", 3, 0);
  CHECK(table.known_tokens() == 2);
  CHECK(table.lookup("door")[2] == doctest::Approx(0.2));
  write_text(dir / "bad.txt", "book 1 2 3\ndoor 1 2\n");
  CHECK_THROWS_WITH_AS(EmbeddingTable::load(dir / "bad.txt", 3, 0), doctest::Contains(":2:"), FormatError);
}

TEST_CASE("lexicon tagger marks verbs as actions and nouns as objects") {
  const auto [action, object] = lexicon_tag({"a", "woman", "holding", "a", "book"});
  CHECK(action == std::vector<bool>{false, false, true, false, false});
  CHECK(object == std::vector<bool>{false, true, false, false, true});
  const auto [a2, o2] = lexicon_tag({"the", "sky", "is", "blue"});
  CHECK(a2 == std::vector<bool>(4, false));
  CHECK(o2 == std::vector<bool>(4, false));
  const auto [a3, o3] = lexicon_tag({"holding", "and", "holding"});
  CHECK(a3 == std::vector<bool>{true, false, true});
}

TEST_CASE("config JSON round-trips and rejects invalid settings") {
  TempDir dir("config");
  RunConfig c = synthetic_config();
  c.ablation.use_object = false;
  c.iou_thresholds = {0.1, 0.5};
  save_config(c, dir / "c.json");
  const RunConfig back = load_config(dir / "c.json");
  CHECK(to_json(back) == to_json(c));

  auto expect_invalid = [](RunConfig bad) { CHECK_THROWS_AS(bad.validate(), ConfigError); };
  RunConfig bad = c;
  bad.depth = 0;
  expect_invalid(bad);
  bad = c;
  bad.filter_sizes = {6, 80};
  expect_invalid(bad);
  bad = c;
  bad.heads = 3;
  expect_invalid(bad);
  bad = c;
  bad.alpha = -0.1;
  expect_invalid(bad);
  bad = c;
  bad.fused_dim = 20;
  expect_invalid(bad);

  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"L_max", 5}, {"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"L_max", "five"}}), ConfigError);
  const RunConfig derived = config_from_json(nlohmann::json{{"d_s", 8}});
  CHECK(derived.fused_dim == 16);
  CHECK(activitynet_defaults().units == 200);
}

TEST_CASE("synthetic generation is pure and satisfies record invariants") {
  const RunConfig c = synthetic_config();
  const auto a = generate_synthetic(3, 12, c);
  const auto b = generate_synthetic(3, 12, c);
  REQUIRE(a.records.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(record_to_json_line(a.records[i]) == record_to_json_line(b.records[i]));
    CHECK(a.features[i].values == b.features[i].values);
    const auto& r = a.records[i];
    CHECK_NOTHROW(validate_record(r));
    CHECK(0.0 <= r.moment.start);
    CHECK(r.moment.start < r.moment.end);
    CHECK(r.moment.end <= r.duration_seconds);
    CHECK(r.tokens.size() <= c.max_query_len);
    for (std::size_t t = 0; t < r.tokens.size(); ++t) CHECK_FALSE((r.action_mask[t] && r.object_mask[t]));
    CHECK(std::count(r.action_mask.begin(), r.action_mask.end(), true) >= 1);
  }
  CHECK(record_to_json_line(generate_synthetic(4, 1, c).records[0]) != record_to_json_line(a.records[0]));

  TempDir x("synth_a"), y("synth_b");
  write_synthetic(a, x.path());
  write_synthetic(b, y.path());
  CHECK(read_bytes(x / "manifest.jsonl") == read_bytes(y / "manifest.jsonl"));
  CHECK(read_bytes(x / "features/synth_0005.vfea") == read_bytes(y / "features/synth_0005.vfea"));
  CHECK(load_manifest(x / "manifest.jsonl").size() == 12);
}

// Detector that only knows the planted prototypes: a unit belongs to the
// target when it is closer to prototype(action) + prototype(object) than to
// the zero-mean background, and the longest such run is the prediction.
TEST_CASE("nearest-centroid oracle recovers planted intervals") {
  const std::uint64_t seed = 1;
  const RunConfig c = synthetic_config();
  const auto data = generate_synthetic(seed, 200, c);
  auto proto = [&](const std::string& w) {
    Rng rng = Rng::derive(seed, "prototype:" + w);
    std::vector<double> v(c.feature_dim);
    for (double& x : v) x = rng.normal();
    return v;
  };
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    const auto& r = data.records[i];
    const auto& f = data.features[i];
    std::string action, object;
    for (std::size_t t = 0; t < r.tokens.size(); ++t) {
      const auto& acts = synthetic_actions();
      const auto& objs = synthetic_objects();
      if (r.action_mask[t] && std::find(acts.begin(), acts.end(), r.tokens[t]) != acts.end()) action = r.tokens[t];
      if (r.object_mask[t] && std::find(objs.begin(), objs.end(), r.tokens[t]) != objs.end()) object = r.tokens[t];
    }
    REQUIRE(!action.empty());
    REQUIRE(!object.empty());
    std::vector<double> pattern = proto(action);
    const auto po = proto(object);
    for (std::size_t j = 0; j < pattern.size(); ++j) pattern[j] += po[j];

    std::size_t best_start = 0, best_len = 0, run_start = 0, run_len = 0;
    for (std::size_t u = 0; u < f.units; ++u) {
      double to_pattern = 0.0, to_background = 0.0;
      for (std::size_t j = 0; j < f.dim; ++j) {
        const double x = f.values[u * f.dim + j];
        to_pattern += (x - pattern[j]) * (x - pattern[j]);
        to_background += x * x;
      }
      if (to_pattern < to_background) {
        if (run_len == 0) run_start = u;
        ++run_len;
        if (run_len > best_len) {
          best_len = run_len;
          best_start = run_start;
        }
      } else {
        run_len = 0;
      }
    }
    if (best_len == 0) continue;
    const Interval predicted = units_to_seconds(
        {static_cast<double>(best_start), static_cast<double>(best_start + best_len - 1)}, r.duration_seconds, f.units);
    if (interval_iou(predicted, r.moment) >= 0.8) ++hits;
  }
  CHECK(static_cast<double>(hits) / 200.0 >= 0.95);
}
