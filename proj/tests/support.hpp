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

#ifndef HDRR_TESTS_SUPPORT_HPP_
#define HDRR_TESTS_SUPPORT_HPP_

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "hdrr/config.hpp"
#include "hdrr/rng.hpp"
#include "hdrr/tensor.hpp"

namespace hdrr::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("hdrr_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Owning copy of a tensor's values; safe to iterate when the tensor is a temporary.
inline std::vector<double> values_of(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

inline std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline Tensor random_tensor(Rng& rng, Shape shape, double lo = -1.0, double hi = 1.0) {
  const std::size_t n = shape_size(shape);
  return Tensor(std::move(shape), random_vector(rng, n, lo, hi));
}

inline Tensor random_parameter(Rng& rng, Shape shape, double lo = -1.0, double hi = 1.0) {
  const std::size_t n = shape_size(shape);
  return Tensor::parameter(std::move(shape), random_vector(rng, n, lo, hi));
}

// Small model used by the encoder, fusion and training tests.
inline RunConfig tiny_config() {
  RunConfig c;
  c.max_query_len = 5;
  c.units = 8;
  c.word_dim = 4;
  c.feature_dim = 3;
  c.hidden_dim = 4;
  c.fused_dim = 8;
  c.depth = 2;
  c.filter_sizes = {2, 4};
  c.heads = 2;
  c.batch_size = 2;
  c.epochs = 2;
  return c;
}

}  // namespace hdrr::testing

#endif  // HDRR_TESTS_SUPPORT_HPP_
