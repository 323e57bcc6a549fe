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

#include "hdrr/dataset.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hdrr/error.hpp"
#include "hdrr/rng.hpp"

namespace hdrr {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<char, 4> kFeatureMagic = {'V', 'F', 'E', 'A'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::vector<bool> parse_mask(const nlohmann::json& arr, const char* key) {
  if (!arr.is_array()) throw FormatError(std::string("'") + key + "' must be an array of 0/1");
  std::vector<bool> mask;
  mask.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
      throw FormatError(std::string("'") + key + "' entries must be 0 or 1");
    }
    mask.push_back(v.get<int>() == 1);
  }
  return mask;
}

DatasetRecord parse_record(const std::string& line) {
  const auto doc = nlohmann::json::parse(line);
  if (!doc.is_object()) throw FormatError("line is not a JSON object");
  static const std::set<std::string> fields = {"id",          "feature_path", "duration_seconds", "tokens",
                                               "action_mask", "object_mask",  "moment"};
  for (const auto& f : fields) {
    if (!doc.contains(f)) throw FormatError("missing field '" + f + "'");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!fields.contains(key)) throw FormatError("unexpected field '" + key + "'");
  }
  DatasetRecord r;
  try {
    r.id = doc.at("id").get<std::string>();
    r.feature_path = doc.at("feature_path").get<std::string>();
    r.duration_seconds = doc.at("duration_seconds").get<double>();
    r.tokens = doc.at("tokens").get<std::vector<std::string>>();
    const auto moment = doc.at("moment").get<std::vector<double>>();
    if (moment.size() != 2) throw FormatError("'moment' must be [start, end]");
    r.moment = {moment[0], moment[1]};
  } catch (const nlohmann::json::type_error& e) {
    throw FormatError(e.what());
  }
  r.action_mask = parse_mask(doc.at("action_mask"), "action_mask");
  r.object_mask = parse_mask(doc.at("object_mask"), "object_mask");
  return r;
}

}  // namespace

void validate_record(const DatasetRecord& r) {
  auto fail = [&r](const std::string& msg) {
    throw ValidationError("record '" + r.id + "': " + msg);
  };
  if (r.id.empty()) throw ValidationError("record with empty id");
  if (!(r.duration_seconds > 0.0) || !std::isfinite(r.duration_seconds)) {
    fail("duration_seconds must be positive");
  }
  const auto [s, e] = r.moment;
  if (!(std::isfinite(s) && std::isfinite(e) && s >= 0.0 && s < e && e <= r.duration_seconds)) {
    std::ostringstream msg;
    msg << "moment [" << s << ", " << e << "] must satisfy 0 <= start < end <= duration ("
        << r.duration_seconds << ")";
    fail(msg.str());
  }
  if (r.action_mask.size() != r.tokens.size()) fail("action_mask length differs from tokens");
  if (r.object_mask.size() != r.tokens.size()) fail("object_mask length differs from tokens");
}

std::vector<DatasetRecord> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open manifest " + path.string());
  const std::filesystem::path dir = path.parent_path();
  std::vector<DatasetRecord> records;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    DatasetRecord r;
    try {
      r = parse_record(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    validate_record(r);
    if (!seen.insert(r.id).second) {
      throw ValidationError("record '" + r.id + "': duplicate id at line " + std::to_string(line_no));
    }
    std::filesystem::path fp(r.feature_path);
    if (fp.is_relative()) r.feature_path = (dir / fp).string();
    records.push_back(std::move(r));
  }
  return records;
}

std::string record_to_json_line(const DatasetRecord& r) {
  ordered_json doc;
  doc["id"] = r.id;
  doc["feature_path"] = r.feature_path;
  doc["duration_seconds"] = r.duration_seconds;
  doc["tokens"] = r.tokens;
  std::vector<int> am(r.action_mask.begin(), r.action_mask.end());
  std::vector<int> om(r.object_mask.begin(), r.object_mask.end());
  doc["action_mask"] = am;
  doc["object_mask"] = om;
  doc["moment"] = {r.moment.start, r.moment.end};
  return doc.dump();
}

void save_manifest(const std::vector<DatasetRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest " + path.string());
  for (const auto& r : records) out << record_to_json_line(r) << "\n";
}

Tensor FeatureMatrix::to_tensor() const { return Tensor({units, dim}, values); }

FeatureMatrix read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open feature file " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kFeatureMagic.data(), 4) != 0) {
    throw FormatError(path.string() + ": bad magic, expected VFEA");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  FeatureMatrix f;
  f.units = get_u32(p + 4);
  f.dim = get_u32(p + 8);
  if (f.units == 0 || f.dim == 0) throw FormatError(path.string() + ": zero unit count or dimension");
  const std::size_t expected = 12 + f.units * f.dim * 4;
  if (bytes.size() != expected) {
    throw FormatError(path.string() + ": payload has " + std::to_string(bytes.size() - 12) +
                      " bytes, expected " + std::to_string(expected - 12));
  }
  f.values.resize(f.units * f.dim);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const float v = std::bit_cast<float>(get_u32(p + 12 + 4 * i));
    if (!std::isfinite(v)) {
      throw FormatError(path.string() + ": non-finite value at unit " + std::to_string(i / f.dim));
    }
    f.values[i] = v;
  }
  return f;
}

void write_feature_file(const FeatureMatrix& f, const std::filesystem::path& path) {
  if (f.values.size() != f.units * f.dim) throw DimensionError("feature matrix size mismatch");
  std::string bytes(kFeatureMagic.begin(), kFeatureMagic.end());
  bytes.reserve(12 + 4 * f.values.size());
  put_u32(bytes, static_cast<std::uint32_t>(f.units));
  put_u32(bytes, static_cast<std::uint32_t>(f.dim));
  for (double v : f.values) put_u32(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write feature file " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

FeatureMatrix resample_units(const FeatureMatrix& f, std::size_t units) {
  if (units == 0) throw ConfigError("resample to zero units");
  if (units == f.units) return f;
  FeatureMatrix out;
  out.units = units;
  out.dim = f.dim;
  out.values.resize(units * f.dim);
  for (std::size_t i = 0; i < units; ++i) {
    const std::size_t src = i * f.units / units;
    std::copy_n(&f.values[src * f.dim], f.dim, &out.values[i * f.dim]);
  }
  return out;
}

FeatureMatrix load_features(const std::filesystem::path& path, std::size_t units) {
  return resample_units(read_feature_file(path), units);
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path, std::size_t dim,
                                    std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open embedding table " + path.string());
  EmbeddingTable table(dim, seed);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> vec;
    vec.reserve(dim);
    std::string num;
    while (fields >> num) {
      try {
        std::size_t used = 0;
        vec.push_back(std::stod(num, &used));
        if (used != num.size()) throw std::invalid_argument(num);
      } catch (const std::exception&) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + num + "'");
      }
    }
    if (vec.size() != dim) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(dim) + " values for '" + token + "', got " +
                        std::to_string(vec.size()));
    }
    table.insert(token, std::move(vec));
  }
  return table;
}

void EmbeddingTable::insert(const std::string& token, std::vector<double> vec) {
  if (vec.size() != dim_) throw DimensionError("embedding for '" + token + "' has wrong dimension");
  vectors_[token] = std::move(vec);
}

std::vector<double> EmbeddingTable::lookup(const std::string& token) const {
  if (auto it = vectors_.find(token); it != vectors_.end()) return it->second;
  Rng rng = Rng::derive(seed_, "token:" + token);
  std::vector<double> vec(dim_);
  for (double& v : vec) v = rng.uniform(-1.0, 1.0);
  return vec;
}

Tensor embed_tokens(const std::vector<std::string>& tokens, const EmbeddingTable& table,
                    std::size_t max_len) {
  const std::size_t d = table.dim();
  std::vector<double> values(max_len * d, 0.0);
  const std::size_t n = std::min(tokens.size(), max_len);
  for (std::size_t l = 0; l < n; ++l) {
    const auto vec = table.lookup(tokens[l]);
    std::copy(vec.begin(), vec.end(), values.begin() + static_cast<std::ptrdiff_t>(l * d));
  }
  return Tensor({max_len, d}, std::move(values));
}

std::vector<bool> fit_mask(const std::vector<bool>& mask, std::size_t max_len) {
  std::vector<bool> out(max_len, false);
  for (std::size_t i = 0; i < std::min(mask.size(), max_len); ++i) out[i] = mask[i];
  return out;
}

const Lexicon& default_lexicon() {
  static const Lexicon lexicon = {
      {"holding", "opening", "eating", "washing", "closing", "walks", "sitting", "drinking"},
      {"person", "woman", "man", "book", "door", "sandwich", "laptop", "cup", "room", "window"}};
  return lexicon;
}

std::pair<std::vector<bool>, std::vector<bool>> lexicon_tag(const std::vector<std::string>& tokens,
                                                            const Lexicon& lexicon) {
  const std::set<std::string> verbs(lexicon.verbs.begin(), lexicon.verbs.end());
  const std::set<std::string> nouns(lexicon.nouns.begin(), lexicon.nouns.end());
  std::vector<bool> action(tokens.size(), false);
  std::vector<bool> object(tokens.size(), false);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    action[i] = verbs.contains(tokens[i]);
    object[i] = !action[i] && nouns.contains(tokens[i]);
  }
  return {std::move(action), std::move(object)};
}

}  // namespace hdrr
