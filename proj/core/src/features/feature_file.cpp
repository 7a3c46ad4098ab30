// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/features/feature_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "vad/error.hpp"

namespace vad::features {

namespace le {

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xFFu));
}

void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t get_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

float get_f32(const char* p) { return std::bit_cast<float>(get_u32(p)); }

}  // namespace le

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to " + path.string());
}

ag::Tensor load_features(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const std::string where = path.string() + ": ";
  constexpr std::size_t kHeader = 16;
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kFeatureMagic, 4) != 0) {
    throw FormatError(where + "bad magic, not a VADF feature file");
  }
  if (bytes.size() < kHeader) throw FormatError(where + "truncated header");
  const std::uint32_t version = le::get_u32(bytes.data() + 4);
  if (version != kFeatureFormatVersion) {
    throw FormatError(where + "unsupported feature format version " + std::to_string(version));
  }
  const std::uint64_t rows = le::get_u32(bytes.data() + 8);
  const std::uint64_t cols = le::get_u32(bytes.data() + 12);
  if (rows == 0 || cols == 0) throw FormatError(where + "zero-sized feature matrix");
  const std::uint64_t count = rows * cols;
  if (count > std::numeric_limits<std::uint64_t>::max() / 4 || count > (std::uint64_t{1} << 34)) {
    throw FormatError(where + "dimension overflow (" + std::to_string(rows) + " x " + std::to_string(cols) + ")");
  }
  const std::uint64_t payload = bytes.size() - kHeader;
  if (payload < count * 4) {
    throw FormatError(where + "truncated payload: header declares " + std::to_string(count) + " floats, found " +
                      std::to_string(payload / 4));
  }
  if (payload > count * 4) throw FormatError(where + "trailing bytes after the declared payload");

  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i) data[i] = le::get_f32(bytes.data() + kHeader + 4 * i);
  return ag::Tensor({static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)}, std::move(data));
}

void save_features(const ag::Tensor& features, const std::filesystem::path& path) {
  if (features.rank() != 2) throw ShapeError("save_features: expected a 2-D matrix");
  if (features.dim(0) > std::numeric_limits<std::uint32_t>::max() ||
      features.dim(1) > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError(path.string() + ": dimension overflow");
  }
  std::string out(kFeatureMagic, 4);
  out.reserve(16 + 4 * features.size());
  le::put_u32(out, kFeatureFormatVersion);
  le::put_u32(out, static_cast<std::uint32_t>(features.dim(0)));
  le::put_u32(out, static_cast<std::uint32_t>(features.dim(1)));
  for (float v : features.data()) le::put_f32(out, v);
  write_file(path, out);
}

}  // namespace vad::features
