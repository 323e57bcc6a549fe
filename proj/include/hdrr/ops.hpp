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

#ifndef HDRR_OPS_HPP_
#define HDRR_OPS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "hdrr/tensor.hpp"

namespace hdrr {

// [m x k] * [k x n] -> [m x n].
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// Elementwise binary ops. `b` may have the same shape as `a`, be a single
// value, or match the last dimension of `a` (broadcast across rows).
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor softmax_last_dim(const Tensor& a);
// 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
Tensor smooth_l1(const Tensor& a);

// Concatenates along `axis` (0 = rows, last = features). All other
// dimensions must agree.
Tensor concat(std::span<const Tensor> parts, std::size_t axis);
Tensor concat_last_dim(std::span<const Tensor> parts);

Tensor reshape(const Tensor& a, Shape shape);
// Columns [begin, end) of a matrix.
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end);
// Stacks `rows` copies of a vector [d] into [rows x d].
Tensor repeat_rows(const Tensor& v, std::size_t rows);
// Flat element `index` as a scalar [1].
Tensor select(const Tensor& a, std::size_t index);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

// Valid 1-D convolution with stride 1.
//   input  [T x c_in], kernel [w x c_in x c_out], bias [c_out]
//   output [(T - w + 1) x c_out]
// Throws ConfigError when w > T.
Tensor conv1d(const Tensor& input, const Tensor& kernel, const Tensor& bias);

// Mean soft-target binary cross-entropy:
//   -(1/K) sum_k y_k log(r_k) + (1 - y_k) log(1 - r_k)
// with r clamped to [eps, 1 - eps]. `targets` is a constant.
Tensor binary_cross_entropy(const Tensor& r, std::span<const double> targets, double eps = 1e-7);

}  // namespace hdrr

#endif  // HDRR_OPS_HPP_
