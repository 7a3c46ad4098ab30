// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "vad/autograd/tensor.hpp"

namespace vad::features {

// Binary feature file, little-endian:
//   "VADF" | version u32 | T_k u32 | d u32 | T_k * d float32, row-major
inline constexpr char kFeatureMagic[4] = {'V', 'A', 'D', 'F'};
inline constexpr std::uint32_t kFeatureFormatVersion = 1;

/// Reads a [T_k x d] matrix. Throws FormatError naming `path` on a bad magic,
/// unsupported version, truncated or oversized payload, or dimension overflow.
ag::Tensor load_features(const std::filesystem::path& path);
void save_features(const ag::Tensor& features, const std::filesystem::path& path);

// Little-endian primitives shared with the checkpoint format.
namespace le {
void put_u32(std::string& out, std::uint32_t v);
void put_f32(std::string& out, float v);
std::uint32_t get_u32(const char* p);
float get_f32(const char* p);
}  // namespace le

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace vad::features
