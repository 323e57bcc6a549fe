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

#ifndef HDRR_GRU_HPP_
#define HDRR_GRU_HPP_

#include <cstddef>

#include "hdrr/tensor.hpp"

namespace hdrr {

// Weights of one GRU direction. Gates are packed along columns in the order
// update (z), reset (r), candidate (n):
//   input_weights     [d_in x 3 d_h]
//   recurrent_weights [d_h  x 3 d_h]
//   bias              [3 d_h]
//
//   z  = sigmoid(x W_z + h U_z + b_z)
//   r  = sigmoid(x W_r + h U_r + b_r)
//   n  = tanh(x W_n + (r * h) U_n + b_n)
//   h' = (1 - z) * h + z * n
struct GruParams {
  Tensor input_weights;
  Tensor recurrent_weights;
  Tensor bias;

  std::size_t input_size() const { return input_weights.dim(0); }
  std::size_t hidden_size() const { return recurrent_weights.dim(0); }
};

struct BiGruParams {
  GruParams forward;
  GruParams backward;
};

// One step, built from differentiable primitives. x: [d_in], h_prev: [d_h].
Tensor gru_cell(const Tensor& x, const Tensor& h_prev, const GruParams& params);

// Runs the cell over every row of `inputs` [T x d_in] from a zero state and
// returns the hidden states [T x d_h]. With `reverse` the scan starts at the
// last row, and row t of the output is still the state at position t.
// Recorded on the tape as a single node with an explicit BPTT rule.
Tensor gru_sequence(const Tensor& inputs, const GruParams& params, bool reverse);

// [T x 2 d_h]: forward states concatenated with backward states per row.
Tensor bigru(const Tensor& inputs, const BiGruParams& params);

}  // namespace hdrr

#endif  // HDRR_GRU_HPP_
