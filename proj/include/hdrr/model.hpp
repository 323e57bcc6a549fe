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

#ifndef HDRR_MODEL_HPP_
#define HDRR_MODEL_HPP_

#include <array>
#include <string>
#include <vector>

#include "hdrr/config.hpp"
#include "hdrr/dataset.hpp"
#include "hdrr/localizer.hpp"
#include "hdrr/params.hpp"
#include "hdrr/text_encoder.hpp"
#include "hdrr/video_encoder.hpp"

namespace hdrr {

// A record with its features loaded and its query embedded.
struct Sample {
  std::string id;
  QueryInput query;
  Tensor video;  // [T x d_v]
  double duration = 0.0;
  Interval moment;  // seconds
};

EmbeddingTable make_embedding_table(const RunConfig& config);
Sample prepare_sample(const DatasetRecord& record, const RunConfig& config, const EmbeddingTable& table);
std::vector<Sample> prepare_samples(const std::vector<DatasetRecord>& records, const RunConfig& config);

struct ModelOutput {
  SentenceLevels sentence;
  VideoLevels video;
  std::array<Tensor, 3> fused;         // F_hat per level; undefined when disabled
  std::array<Tensor, 3> level_scores;  // r^x [K]; undefined when disabled
  Tensor scores;                       // fused r [K]
  Tensor offset_start;                 // d^s [K]
  Tensor offset_end;                   // d^e [K]
};

// The full forward pass for one query-video pair.
ModelOutput forward(const ModelParams& params, const QueryInput& query, const Tensor& video);

std::vector<Candidate> model_candidates(const RunConfig& config);

// Refined, clamped boundaries of every candidate in unit coordinates.
std::vector<UnitSpan> refined_spans(const ModelOutput& output, const std::vector<Candidate>& candidates,
                                    std::size_t units);

}  // namespace hdrr

#endif  // HDRR_MODEL_HPP_
