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

#include "hdrr/model.hpp"

#include <algorithm>
#include <tuple>

#include "hdrr/error.hpp"
#include "hdrr/fusion.hpp"

namespace hdrr {

EmbeddingTable make_embedding_table(const RunConfig& config) {
  if (config.embedding_path.empty()) return EmbeddingTable(config.word_dim, config.embedding_seed);
  return EmbeddingTable::load(config.embedding_path, config.word_dim, config.embedding_seed);
}

Sample prepare_sample(const DatasetRecord& record, const RunConfig& config, const EmbeddingTable& table) {
  Sample s;
  s.id = record.id;
  s.query.words = embed_tokens(record.tokens, table, config.max_query_len);
  s.query.length = std::min(record.tokens.size(), config.max_query_len);
  s.query.action_mask = fit_mask(record.action_mask, config.max_query_len);
  s.query.object_mask = fit_mask(record.object_mask, config.max_query_len);
  const FeatureMatrix features = load_features(record.feature_path, config.units);
  if (features.dim != config.feature_dim) {
    throw DimensionError("record '" + record.id + "': features have d_v = " + std::to_string(features.dim) +
                         ", config expects " + std::to_string(config.feature_dim));
  }
  s.video = features.to_tensor();
  s.duration = record.duration_seconds;
  s.moment = record.moment;
  return s;
}

std::vector<Sample> prepare_samples(const std::vector<DatasetRecord>& records, const RunConfig& config) {
  const EmbeddingTable table = make_embedding_table(config);
  std::vector<Sample> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(prepare_sample(r, config, table));
  return out;
}

ModelOutput forward(const ModelParams& params, const QueryInput& query, const Tensor& video) {
  ModelOutput out;
  out.sentence = encode_sentence(query, params);
  out.video = encode_video(video, params);
  std::vector<Tensor> enabled_scores;
  for (Level l : kAllLevels) {
    const LevelParams& lp = params.level(l);
    if (!lp.enabled) continue;
    const std::size_t i = static_cast<std::size_t>(l);
    out.fused[i] = fuse(out.video.sequences[i], out.sentence.pooled[i], lp.fusion);
    out.level_scores[i] = rank_level(out.fused[i], lp.rank);
    enabled_scores.push_back(out.level_scores[i]);
  }
  out.scores = fuse_scores(enabled_scores, params.score_fuse);
  std::tie(out.offset_start, out.offset_end) =
      regress_offsets(out.fused[0], params.offset_start, params.offset_end);
  return out;
}

std::vector<Candidate> model_candidates(const RunConfig& config) {
  return enumerate_candidates(config.units, config.filter_sizes);
}

std::vector<UnitSpan> refined_spans(const ModelOutput& output, const std::vector<Candidate>& candidates,
                                    std::size_t units) {
  return refine(candidates, output.offset_start.values(), output.offset_end.values(), units);
}

}  // namespace hdrr
