// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>

#include "vad/mil/model.hpp"

namespace vad::mil {

// Checkpoint file, little-endian:
//   "VADC" | version u32 | metadata length u32 | metadata JSON (UTF-8)
//   | tensor count u32 | per tensor: name length u32 | name | rank u32
//   | dims u32 x rank | float32 values, row-major
// The metadata always carries the model shape under "model".
inline constexpr char kCheckpointMagic[4] = {'V', 'A', 'D', 'C'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelParams model;
  nlohmann::json metadata;
};

void save_checkpoint(const std::filesystem::path& path, ModelParams& model, const nlohmann::json& metadata);
Checkpoint load_checkpoint(const std::filesystem::path& path);

nlohmann::json to_json(const ModelShape& shape);
ModelShape model_shape_from_json(const nlohmann::json& j);

}  // namespace vad::mil
