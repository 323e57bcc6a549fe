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

#ifndef HDRR_DATASET_HPP_
#define HDRR_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hdrr/tensor.hpp"

namespace hdrr {

// Seconds; start < end for annotated moments.
struct Interval {
  double start = 0.0;
  double end = 0.0;
};

// One query-video pair from a JSON Lines manifest.
struct DatasetRecord {
  std::string id;
  std::string feature_path;  // resolved against the manifest directory on load
  double duration_seconds = 0.0;
  std::vector<std::string> tokens;
  std::vector<bool> action_mask;
  std::vector<bool> object_mask;
  Interval moment;
};

// Checks the record invariants; throws ValidationError naming the record.
void validate_record(const DatasetRecord& record);

// One record per non-empty line, in file order. Relative feature paths are
// resolved against the manifest's directory.
std::vector<DatasetRecord> load_manifest(const std::filesystem::path& path);
// Writes records as given (feature paths are not rewritten).
void save_manifest(const std::vector<DatasetRecord>& records, const std::filesystem::path& path);
std::string record_to_json_line(const DatasetRecord& record);

// T x d_v unit features, row-major.
struct FeatureMatrix {
  std::size_t units = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  Tensor to_tensor() const;
};

// "VFEA" | u32 T | u32 d_v | T * d_v f32, all little-endian.
FeatureMatrix read_feature_file(const std::filesystem::path& path);
void write_feature_file(const FeatureMatrix& features, const std::filesystem::path& path);
// Nearest-neighbour resampling along the unit axis: row i <- floor(i * T / units).
FeatureMatrix resample_units(const FeatureMatrix& features, std::size_t units);
// Reads and resamples to `units` rows.
FeatureMatrix load_features(const std::filesystem::path& path, std::size_t units);

// Word vectors from a text file, with a deterministic hashed vector for
// tokens that are not in the file.
class EmbeddingTable {
 public:
  EmbeddingTable(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {}

  // "token v1 ... v_dim" per line.
  static EmbeddingTable load(const std::filesystem::path& path, std::size_t dim, std::uint64_t seed);

  std::size_t dim() const { return dim_; }
  std::size_t known_tokens() const { return vectors_.size(); }
  void insert(const std::string& token, std::vector<double> vec);
  std::vector<double> lookup(const std::string& token) const;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// [max_len x d_w]; rows past the sentence are zero and tokens past max_len
// are dropped.
Tensor embed_tokens(const std::vector<std::string>& tokens, const EmbeddingTable& table,
                    std::size_t max_len);

// Extends a record mask with false to `max_len` (or truncates).
std::vector<bool> fit_mask(const std::vector<bool>& mask, std::size_t max_len);

// Word lists standing in for a semantic role labeller on synthetic data.
struct Lexicon {
  std::vector<std::string> verbs;
  std::vector<std::string> nouns;
};

const Lexicon& default_lexicon();

// Marks lexicon verbs as actions and lexicon nouns as objects.
std::pair<std::vector<bool>, std::vector<bool>> lexicon_tag(const std::vector<std::string>& tokens,
                                                            const Lexicon& lexicon = default_lexicon());

}  // namespace hdrr

#endif  // HDRR_DATASET_HPP_
