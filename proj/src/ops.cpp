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

#include "hdrr/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdrr/error.hpp"

namespace hdrr {
namespace {

using detail::Node;

// Grad buffer of parent `i`, or nullptr when that parent is a constant.
std::vector<double>* parent_grad(Node& self, std::size_t i) {
  Node& p = *self.parents[i];
  if (!p.requires_grad) return nullptr;
  return &p.grad_buffer();
}

void require_matrix(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(op) + " expects a matrix, got " + shape_string(t.shape()));
  }
}

enum class Broadcast { kSame, kScalar, kRow };

Broadcast broadcast_mode(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() == b.shape()) return Broadcast::kSame;
  if (b.size() == 1) return Broadcast::kScalar;
  if (a.rank() >= 2 && b.rank() == 1 && b.size() == a.shape().back()) return Broadcast::kRow;
  throw DimensionError(std::string(op) + ": incompatible shapes " + shape_string(a.shape()) +
                       " and " + shape_string(b.shape()));
}

inline std::size_t b_index(Broadcast mode, std::size_t i, std::size_t row_len) {
  switch (mode) {
    case Broadcast::kSame:
      return i;
    case Broadcast::kScalar:
      return 0;
    case Broadcast::kRow:
      return i % row_len;
  }
  return i;
}

template <typename Fn, typename DFn>
Tensor unary(const Tensor& a, Fn fn, DFn dfn) {
  std::vector<double> out(a.size());
  auto av = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(av[i]);
  // dfn(x, y) is the derivative given input x and output y.
  return make_result(a.shape(), std::move(out), {a}, [dfn](Node& self) {
    auto* ga = parent_grad(self, 0);
    if (!ga) return;
    const auto& x = self.parents[0]->value;
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      (*ga)[i] += self.grad[i] * dfn(x[i], self.value[i]);
    }
  });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: inner dimensions disagree for " + shape_string(a.shape()) +
                         " and " + shape_string(b.shape()));
  }
  std::vector<double> out(m * n, 0.0);
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < m; ++i) {
    double* row = &out[i * n];
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = &bv[p * n];
      for (std::size_t j = 0; j < n; ++j) row[j] += aip * brow[j];
    }
  }
  return make_result({m, n}, std::move(out), {a, b}, [m, k, n](Node& self) {
    const auto& g = self.grad;
    const auto& av = self.parents[0]->value;
    const auto& bv = self.parents[1]->value;
    if (auto* ga = parent_grad(self, 0)) {
      // dA = dC * B^T
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j) s += g[i * n + j] * bv[p * n + j];
          (*ga)[i * k + p] += s;
        }
      }
    }
    if (auto* gb = parent_grad(self, 1)) {
      // dB = A^T * dC
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = av[i * k + p];
          if (aip == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) (*gb)[p * n + j] += aip * g[i * n + j];
        }
      }
    }
  });
}

Tensor transpose(const Tensor& a) {
  require_matrix(a, "transpose");
  const std::size_t m = a.dim(0), n = a.dim(1);
  std::vector<double> out(m * n);
  auto av = a.values();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = av[i * n + j];
  return make_result({n, m}, std::move(out), {a}, [m, n](Node& self) {
    auto* ga = parent_grad(self, 0);
    if (!ga) return;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) (*ga)[i * n + j] += self.grad[j * m + i];
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  const Broadcast mode = broadcast_mode(a, b, "add");
  const std::size_t row = a.shape().back();
  std::vector<double> out(a.size());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[b_index(mode, i, row)];
  return make_result(a.shape(), std::move(out), {a, b}, [mode, row](Node& self) {
    if (auto* ga = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*ga)[i] += self.grad[i];
    }
    if (auto* gb = parent_grad(self, 1)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*gb)[b_index(mode, i, row)] += self.grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  const Broadcast mode = broadcast_mode(a, b, "sub");
  const std::size_t row = a.shape().back();
  std::vector<double> out(a.size());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] - bv[b_index(mode, i, row)];
  return make_result(a.shape(), std::move(out), {a, b}, [mode, row](Node& self) {
    if (auto* ga = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*ga)[i] += self.grad[i];
    }
    if (auto* gb = parent_grad(self, 1)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) (*gb)[b_index(mode, i, row)] -= self.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  const Broadcast mode = broadcast_mode(a, b, "mul");
  const std::size_t row = a.shape().back();
  std::vector<double> out(a.size());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[b_index(mode, i, row)];
  return make_result(a.shape(), std::move(out), {a, b}, [mode, row](Node& self) {
    const auto& av = self.parents[0]->value;
    const auto& bv = self.parents[1]->value;
    if (auto* ga = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i)
        (*ga)[i] += self.grad[i] * bv[b_index(mode, i, row)];
    }
    if (auto* gb = parent_grad(self, 1)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i)
        (*gb)[b_index(mode, i, row)] += self.grad[i] * av[i];
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  return unary(a, [factor](double x) { return factor * x; },
               [factor](double, double) { return factor; });
}

Tensor relu(const Tensor& a) {
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& a) {
  return unary(a, [](double x) { return std::tanh(x); },
               [](double, double y) { return 1.0 - y * y; });
}

Tensor smooth_l1(const Tensor& a) {
  return unary(
      a, [](double x) { return std::abs(x) < 1.0 ? 0.5 * x * x : std::abs(x) - 0.5; },
      [](double x, double) {
        if (std::abs(x) < 1.0) return x;
        return x > 0.0 ? 1.0 : -1.0;
      });
}

Tensor softmax_last_dim(const Tensor& a) {
  const std::size_t n = a.shape().back();
  const std::size_t rows = a.size() / n;
  std::vector<double> out(a.size());
  auto av = a.values();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = &av[r * n];
    double* y = &out[r * n];
    const double mx = *std::max_element(x, x + n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      y[j] = std::exp(x[j] - mx);
      total += y[j];
    }
    for (std::size_t j = 0; j < n; ++j) y[j] /= total;
  }
  return make_result(a.shape(), std::move(out), {a}, [rows, n](Node& self) {
    auto* ga = parent_grad(self, 0);
    if (!ga) return;
    for (std::size_t r = 0; r < rows; ++r) {
      const double* y = &self.value[r * n];
      const double* g = &self.grad[r * n];
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += g[j] * y[j];
      for (std::size_t j = 0; j < n; ++j) (*ga)[r * n + j] += y[j] * (g[j] - dot);
    }
  });
}

Tensor concat(std::span<const Tensor> parts, std::size_t axis) {
  if (parts.empty()) throw DimensionError("concat: no inputs");
  const Shape& first = parts[0].shape();
  if (axis >= first.size()) throw DimensionError("concat: axis out of range for " + shape_string(first));
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (const Tensor& p : parts) {
    const Shape& s = p.shape();
    bool ok = s.size() == first.size();
    for (std::size_t d = 0; ok && d < s.size(); ++d) {
      if (d != axis && s[d] != first[d]) ok = false;
    }
    if (!ok) {
      throw DimensionError("concat: incompatible shapes " + shape_string(first) + " and " +
                           shape_string(s));
    }
    out_shape[axis] += s[axis];
  }
  // View every part as [outer x (axis_len * inner)].
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= first[d];
  for (std::size_t d = axis + 1; d < first.size(); ++d) inner *= first[d];
  std::vector<std::size_t> widths;
  widths.reserve(parts.size());
  for (const Tensor& p : parts) widths.push_back(p.shape()[axis] * inner);
  const std::size_t total_width = out_shape[axis] * inner;

  std::vector<double> out(outer * total_width);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto pv = parts[i].values();
    for (std::size_t o = 0; o < outer; ++o) {
      std::copy_n(&pv[o * widths[i]], widths[i], &out[o * total_width + offset]);
    }
    offset += widths[i];
  }
  std::vector<Tensor> inputs(parts.begin(), parts.end());
  return make_result(std::move(out_shape), std::move(out), std::move(inputs),
                     [widths, outer, total_width](Node& self) {
                       std::size_t offset = 0;
                       for (std::size_t i = 0; i < widths.size(); ++i) {
                         if (auto* gp = parent_grad(self, i)) {
                           for (std::size_t o = 0; o < outer; ++o) {
                             for (std::size_t j = 0; j < widths[i]; ++j) {
                               (*gp)[o * widths[i] + j] += self.grad[o * total_width + offset + j];
                             }
                           }
                         }
                         offset += widths[i];
                       }
                     });
}

Tensor concat_last_dim(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat_last_dim: no inputs");
  return concat(parts, parts[0].rank() - 1);
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_size(shape) != a.size()) {
    throw DimensionError("reshape: cannot view " + shape_string(a.shape()) + " as " +
                         shape_string(shape));
  }
  std::vector<double> out(a.values().begin(), a.values().end());
  return make_result(std::move(shape), std::move(out), {a}, [](Node& self) {
    auto* ga = parent_grad(self, 0);
    if (!ga) return;
    for (std::size_t i = 0; i < self.grad.size(); ++i) (*ga)[i] += self.grad[i];
  });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end) {
  require_matrix(a, "slice_cols");
  const std::size_t m = a.dim(0), n = a.dim(1);
  if (begin >= end || end > n) {
    throw DimensionError("slice_cols: range [" + std::to_string(begin) + ", " + std::to_string(end) +
                         ") invalid for " + shape_string(a.shape()));
  }
  const std::size_t w = end - begin;
  std::vector<double> out(m * w);
  auto av = a.values();
  for (std::size_t i = 0; i < m; ++i) std::copy_n(&av[i * n + begin], w, &out[i * w]);
  return make_result({m, w}, std::move(out), {a}, [m, n, w, begin](Node& self) {
    auto* ga = parent_grad(self, 0);
    if (!ga) return;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < w; ++j) (*ga)[i * n + begin + j] += self.grad[i * w + j];
  });
}

Tensor repeat_rows(const Tensor& v, std::size_t rows) {
  if (v.rank() != 1) throw DimensionError("repeat_rows expects a vector, got " + shape_string(v.shape()));
  if (rows == 0) throw DimensionError("repeat_rows: zero rows");
  const std::size_t d = v.size();
  std::vector<double> out(rows * d);
  auto vv = v.values();
  for (std::size_t r = 0; r < rows; ++r) std::copy_n(vv.data(), d, &out[r * d]);
  return make_result({rows, d}, std::move(out), {v}, [rows, d](Node& self) {
    auto* gv = parent_grad(self, 0);
    if (!gv) return;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < d; ++j) (*gv)[j] += self.grad[r * d + j];
  });
}

Tensor select(const Tensor& a, std::size_t index) {
  if (index >= a.size()) {
    throw DimensionError("select: index " + std::to_string(index) + " out of range for " +
                         shape_string(a.shape()));
  }
  return make_result({1}, {a[index]}, {a}, [index](Node& self) {
    if (auto* ga = parent_grad(self, 0)) (*ga)[index] += self.grad[0];
  });
}

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (double x : a.values()) total += x;
  return make_result({1}, {total}, {a}, [](Node& self) {
    auto* ga = parent_grad(self, 0);
    if (!ga) return;
    for (double& g : *ga) g += self.grad[0];
  });
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.size())); }

Tensor conv1d(const Tensor& input, const Tensor& kernel, const Tensor& bias) {
  require_matrix(input, "conv1d");
  if (kernel.rank() != 3) {
    throw DimensionError("conv1d: kernel must be [w x c_in x c_out], got " +
                         shape_string(kernel.shape()));
  }
  const std::size_t len = input.dim(0), c_in = input.dim(1);
  const std::size_t w = kernel.dim(0), c_out = kernel.dim(2);
  if (kernel.dim(1) != c_in) {
    throw DimensionError("conv1d: kernel " + shape_string(kernel.shape()) +
                         " does not match input channels of " + shape_string(input.shape()));
  }
  if (bias.size() != c_out) {
    throw DimensionError("conv1d: bias " + shape_string(bias.shape()) + " does not match c_out " +
                         std::to_string(c_out));
  }
  if (w > len) {
    throw ConfigError("conv1d: filter size " + std::to_string(w) + " exceeds sequence length " +
                      std::to_string(len) + "; drop this filter size");
  }
  const std::size_t out_len = len - w + 1;
  const std::size_t window = w * c_in;  // a window of rows is contiguous
  std::vector<double> out(out_len * c_out);
  auto x = input.values();
  auto k = kernel.values();
  auto b = bias.values();
  for (std::size_t p = 0; p < out_len; ++p) {
    for (std::size_t o = 0; o < c_out; ++o) out[p * c_out + o] = b[o];
    const double* xw = &x[p * c_in];
    for (std::size_t q = 0; q < window; ++q) {
      const double xv = xw[q];
      const double* kr = &k[q * c_out];
      for (std::size_t o = 0; o < c_out; ++o) out[p * c_out + o] += xv * kr[o];
    }
  }
  return make_result({out_len, c_out}, std::move(out), {input, kernel, bias},
                     [out_len, c_in, c_out, window](Node& self) {
                       const auto& g = self.grad;
                       const auto& x = self.parents[0]->value;
                       const auto& k = self.parents[1]->value;
                       auto* gx = parent_grad(self, 0);
                       auto* gk = parent_grad(self, 1);
                       auto* gb = parent_grad(self, 2);
                       for (std::size_t p = 0; p < out_len; ++p) {
                         const double* gp = &g[p * c_out];
                         if (gb) {
                           for (std::size_t o = 0; o < c_out; ++o) (*gb)[o] += gp[o];
                         }
                         for (std::size_t q = 0; q < window; ++q) {
                           const std::size_t xi = p * c_in + q;
                           double acc = 0.0;
                           for (std::size_t o = 0; o < c_out; ++o) {
                             acc += gp[o] * k[q * c_out + o];
                             if (gk) (*gk)[q * c_out + o] += x[xi] * gp[o];
                           }
                           if (gx) (*gx)[xi] += acc;
                         }
                       }
                     });
}

Tensor binary_cross_entropy(const Tensor& r, std::span<const double> targets, double eps) {
  if (targets.size() != r.size()) {
    throw DimensionError("binary_cross_entropy: " + std::to_string(targets.size()) +
                         " targets for scores " + shape_string(r.shape()));
  }
  const std::size_t count = r.size();
  std::vector<double> y(targets.begin(), targets.end());
  auto rv = r.values();
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double p = std::clamp(rv[k], eps, 1.0 - eps);
    total += y[k] * std::log(p) + (1.0 - y[k]) * std::log(1.0 - p);
  }
  const double loss = -total / static_cast<double>(count);
  return make_result({1}, {loss}, {r}, [y = std::move(y), eps, count](Node& self) {
    auto* gr = parent_grad(self, 0);
    if (!gr) return;
    const auto& rv = self.parents[0]->value;
    const double scale = self.grad[0] / static_cast<double>(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double p = rv[k];
      if (p < eps || p > 1.0 - eps) continue;  // clamped: flat
      (*gr)[k] += scale * (p - y[k]) / (p * (1.0 - p));
    }
  });
}

}  // namespace hdrr
