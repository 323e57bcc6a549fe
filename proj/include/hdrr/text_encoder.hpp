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

#ifndef HDRR_TEXT_ENCODER_HPP_
#define HDRR_TEXT_ENCODER_HPP_

#include <array>
#include <cstddef>
#include <vector>

#include "hdrr/params.hpp"
#include "hdrr/tensor.hpp"

namespace hdrr {

// Model-ready query: embeddings padded to L_max and role masks extended to
// L_max.
struct QueryInput {
  Tensor words;  // [L_max x d_w]
  std::size_t length = 0;  // tokens actually present (<= L_max)
  std::vector<bool> action_mask;
  std::vector<bool> object_mask;
};

struct SentenceLevels {
  std::array<Tensor, 3> sequences;  // S^g, S^a, S^o, each [L_max x d_s]
  std::array<Tensor, 3> pooled;     // [d_s]; undefined for disabled levels

  const Tensor& sequence(Level l) const { return sequences[static_cast<std::size_t>(l)]; }
  const Tensor& pooled_at(Level l) const { return pooled[static_cast<std::size_t>(l)]; }
};

// ReLU(BiGRU(x) W + b) row-wise: the shared encoder for words and video units.
Tensor encode_bigru_fused(const Tensor& sequence, const BiGruParams& gru, const Dense& fuse);

// S^g for the padded word matrix.
Tensor encode_global(const Tensor& words, const BiGruParams& gru, const Dense& fuse);

// Zeroes every row whose mask entry is false. mask.size() must equal rows.
Tensor mask_semantic(const Tensor& sequence, const std::vector<bool>& mask);

// Multi-head self-attention over all rows, followed by the learned
// sequence-axis projection pool [1 x L]; returns [d_s].
Tensor attend_pool(const Tensor& sequence, const AttentionParams& params, std::size_t heads);

// Mean over the rows flagged in `rows`; zero vector when none are.
Tensor mean_pool(const Tensor& sequence, const std::vector<bool>& rows);

SentenceLevels encode_sentence(const QueryInput& query, const ModelParams& params);

}  // namespace hdrr

#endif  // HDRR_TEXT_ENCODER_HPP_
