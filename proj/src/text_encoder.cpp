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

#include "hdrr/text_encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdrr/error.hpp"
#include "hdrr/ops.hpp"

namespace hdrr {

Tensor encode_bigru_fused(const Tensor& sequence, const BiGruParams& gru, const Dense& fuse) {
  return relu(affine(bigru(sequence, gru), fuse));
}

Tensor encode_global(const Tensor& words, const BiGruParams& gru, const Dense& fuse) {
  return encode_bigru_fused(words, gru, fuse);
}

Tensor mask_semantic(const Tensor& sequence, const std::vector<bool>& mask) {
  const std::size_t rows = sequence.dim(0), cols = sequence.dim(1);
  if (mask.size() != rows) {
    throw DimensionError("mask_semantic: mask of length " + std::to_string(mask.size()) +
                         " for " + shape_string(sequence.shape()));
  }
  std::vector<double> keep(rows * cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!mask[r]) continue;
    for (std::size_t c = 0; c < cols; ++c) keep[r * cols + c] = 1.0;
  }
  return mul(sequence, Tensor({rows, cols}, std::move(keep)));
}

Tensor attend_pool(const Tensor& sequence, const AttentionParams& params, std::size_t heads) {
  const std::size_t len = sequence.dim(0), ds = sequence.dim(1);
  if (heads == 0 || ds % heads != 0) {
    throw ConfigError("attend_pool: d_s (" + std::to_string(ds) + ") is not divisible by " +
                      std::to_string(heads) + " heads");
  }
  if (params.pool.rank() != 2 || params.pool.dim(0) != 1 || params.pool.dim(1) != len) {
    throw DimensionError("attend_pool: pooling weights " + shape_string(params.pool.shape()) +
                         " do not match sequence length " + std::to_string(len));
  }
  const std::size_t dh = ds / heads;
  const Tensor q = matmul(sequence, params.query);
  const Tensor k = matmul(sequence, params.key);
  const Tensor v = matmul(sequence, params.value);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<Tensor> outputs;
  outputs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const Tensor qh = slice_cols(q, h * dh, (h + 1) * dh);
    const Tensor kh = slice_cols(k, h * dh, (h + 1) * dh);
    const Tensor vh = slice_cols(v, h * dh, (h + 1) * dh);
    const Tensor weights = softmax_last_dim(scale(matmul(qh, transpose(kh)), inv_sqrt));
    outputs.push_back(matmul(weights, vh));
  }
  const Tensor joined = concat_last_dim(outputs);  // [L x d_s]
  return reshape(matmul(params.pool, joined), {ds});
}

Tensor mean_pool(const Tensor& sequence, const std::vector<bool>& rows) {
  const std::size_t len = sequence.dim(0), ds = sequence.dim(1);
  if (rows.size() != len) {
    throw DimensionError("mean_pool: row mask of length " + std::to_string(rows.size()) + " for " +
                         shape_string(sequence.shape()));
  }
  std::size_t count = 0;
  for (bool r : rows) count += r ? 1 : 0;
  std::vector<double> weights(len, 0.0);
  if (count > 0) {
    for (std::size_t i = 0; i < len; ++i) weights[i] = rows[i] ? 1.0 / static_cast<double>(count) : 0.0;
  }
  return reshape(matmul(Tensor({1, len}, std::move(weights)), sequence), {ds});
}

SentenceLevels encode_sentence(const QueryInput& query, const ModelParams& params) {
  const RunConfig& config = params.config;
  const std::size_t max_len = config.max_query_len;
  if (query.words.rank() != 2 || query.words.dim(0) != max_len || query.words.dim(1) != config.word_dim) {
    throw DimensionError("encode_sentence: word matrix " + shape_string(query.words.shape()) +
                         " does not match [L_max x d_w] = [" + std::to_string(max_len) + "x" +
                         std::to_string(config.word_dim) + "]");
  }
  SentenceLevels out;
  const Tensor global = encode_global(query.words, params.text_gru, params.text_fuse);
  out.sequences[0] = global;
  out.sequences[1] = mask_semantic(global, query.action_mask);
  out.sequences[2] = mask_semantic(global, query.object_mask);

  std::vector<bool> valid(max_len, false);
  for (std::size_t i = 0; i < std::min(query.length, max_len); ++i) valid[i] = true;
  const std::array<const std::vector<bool>*, 3> pool_rows = {&valid, &query.action_mask,
                                                             &query.object_mask};
  for (Level l : kAllLevels) {
    const LevelParams& lp = params.level(l);
    if (!lp.enabled) continue;
    const std::size_t i = static_cast<std::size_t>(l);
    out.pooled[i] = lp.attention ? attend_pool(out.sequences[i], *lp.attention, config.heads)
                                 : mean_pool(out.sequences[i], *pool_rows[i]);
  }
  return out;
}

}  // namespace hdrr
