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

#include "hdrr/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hdrr/error.hpp"

namespace hdrr {
namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint64_t read_le(std::size_t width) {
    if (pos_ + width > bytes_.size()) throw FormatError("checkpoint truncated at byte " + std::to_string(pos_));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += width;
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(read_le(4)); }
  double f64() { return std::bit_cast<double>(read_le(8)); }
  std::string text(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw FormatError("checkpoint truncated at byte " + std::to_string(pos_));
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const std::vector<NamedTensor>& registry) {
  std::string out = "HDRR";
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(registry.size()));
  for (const auto& p : registry) {
    put_u32(out, static_cast<std::uint32_t>(p.name.size()));
    out += p.name;
    put_u32(out, static_cast<std::uint32_t>(p.tensor.rank()));
    for (std::size_t d : p.tensor.shape()) put_u32(out, static_cast<std::uint32_t>(d));
    for (double v : p.tensor.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

std::vector<CheckpointEntry> decode_checkpoint(const std::string& bytes) {
  if (bytes.size() < 12 || bytes.compare(0, 4, "HDRR") != 0) throw FormatError("checkpoint: bad magic, expected HDRR");
  Reader in(bytes);
  in.text(4);
  const std::uint32_t version = in.u32();
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint: unsupported format version " + std::to_string(version));
  }
  const std::uint32_t count = in.u32();
  std::vector<CheckpointEntry> entries;
  entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    CheckpointEntry e;
    e.name = in.text(in.u32());
    const std::uint32_t rank = in.u32();
    for (std::uint32_t d = 0; d < rank; ++d) e.shape.push_back(in.u32());
    e.values.resize(shape_size(e.shape));
    for (double& v : e.values) v = in.f64();
    entries.push_back(std::move(e));
  }
  if (!in.done()) throw FormatError("checkpoint: trailing bytes after the last entry");
  return entries;
}

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  const std::string bytes = encode_checkpoint(params.registry);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ModelParams load_checkpoint(const std::filesystem::path& path, const RunConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto entries = decode_checkpoint(bytes);
  ModelParams params = ModelParams::create(config, 0);
  if (entries.size() != params.registry.size()) {
    throw FormatError("checkpoint " + path.string() + " has " + std::to_string(entries.size()) +
                      " tensors, the configured model has " + std::to_string(params.registry.size()));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& slot = params.registry[i];
    if (entries[i].name != slot.name || entries[i].shape != slot.tensor.shape()) {
      throw FormatError("checkpoint " + path.string() + ": entry " + std::to_string(i) + " is '" + entries[i].name +
                        "' " + shape_string(entries[i].shape) + ", expected '" + slot.name + "' " +
                        shape_string(slot.tensor.shape()));
    }
    auto dst = slot.tensor.mutable_values();
    std::copy(entries[i].values.begin(), entries[i].values.end(), dst.begin());
  }
  return params;
}

}  // namespace hdrr
