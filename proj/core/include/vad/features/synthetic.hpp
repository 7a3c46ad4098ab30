// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "vad/autograd/tensor.hpp"
#include "vad/features/manifest.hpp"
#include "vad/rng.hpp"

namespace vad::features {

/// Synthetic snippet features with planted anomalies.
///
/// Normal snippets are N(base, noise_std^2 I). Abnormal snippets add a fixed
/// offset of Euclidean norm `anomaly_shift` along a seeded sign pattern, so
/// every coordinate moves by anomaly_shift / sqrt(d). Each abnormal video
/// holds epsilon contiguous abnormal snippets, epsilon uniform in
/// [epsilon_min, epsilon_max], placed over whole snippets only.
struct SyntheticConfig {
  std::size_t n_normal = 100;    // per split
  std::size_t n_abnormal = 100;  // per split
  std::size_t d = 32;
  std::size_t delta = 16;
  std::size_t min_frames = 16 * 16;
  std::size_t max_frames = 48 * 16;
  std::size_t epsilon_min = 2;
  std::size_t epsilon_max = 5;
  double anomaly_shift = 0.0;
  double noise_std = 1.0;
  double base_scale = 0.0;  // per-coordinate std of the shared base mean
  std::uint64_t seed = 0;

  void validate() const;
};

/// Defaults used by the end-to-end checks: d = 32 and a per-coordinate mean
/// shift of 1.5 noise standard deviations.
SyntheticConfig default_synthetic_config(std::uint64_t seed = 0);
/// Harder variant with a per-coordinate shift of 0.35 noise standard deviations.
SyntheticConfig hard_synthetic_config(std::uint64_t seed = 0);

/// Draws snippets from the normal / abnormal distributions of a config.
class SnippetSampler {
 public:
  explicit SnippetSampler(const SyntheticConfig& cfg);

  void normal(Rng& rng, std::span<float> out) const;
  void abnormal(Rng& rng, std::span<float> out) const;
  const std::vector<double>& base() const { return base_; }
  const std::vector<double>& shift() const { return shift_; }

 private:
  double noise_std_;
  std::vector<double> base_;
  std::vector<double> shift_;
};

struct SyntheticSplit {
  DatasetManifest manifest;
  std::vector<VideoRecord> records;
  GroundTruth truth;  // every video id is present; normal videos map to []
};

struct SyntheticDataset {
  SyntheticConfig config;
  SyntheticSplit train;
  SyntheticSplit test;
};

SyntheticDataset generate_synthetic(const SyntheticConfig& cfg);

// Layout written by write_synthetic():
//   <dir>/train_manifest.json, <dir>/test_manifest.json,
//   <dir>/test_ground_truth.json, <dir>/generator.json,
//   <dir>/features/{train,test}/<id>.vadf
void write_synthetic(const SyntheticDataset& data, const std::filesystem::path& dir);

inline constexpr const char* kTrainManifestName = "train_manifest.json";
inline constexpr const char* kTestManifestName = "test_manifest.json";
inline constexpr const char* kGroundTruthName = "test_ground_truth.json";

}  // namespace vad::features
