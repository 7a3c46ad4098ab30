// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vad/autograd/tensor.hpp"

namespace vad::features {

/// One video as a bag of snippet features.
struct VideoRecord {
  std::string id;
  int label = 0;  // 1 if the video contains an anomaly
  std::size_t frame_count = 0;
  std::size_t snippet_len = 16;
  ag::Tensor features;  // [T_k x d], T_k = ceil(frame_count / snippet_len)

  std::size_t snippets() const { return features.dim(0); }
  std::size_t dim() const { return features.dim(1); }
};

std::size_t snippet_count(std::size_t frame_count, std::size_t snippet_len);

struct ManifestEntry {
  std::string id;
  std::string path;  // relative to the manifest's directory
  int label = 0;
  std::size_t frame_count = 0;
};

struct DatasetManifest {
  std::uint32_t version = 1;
  std::size_t d = 0;
  std::size_t delta = 16;
  std::string split;  // "train" or "test"
  std::vector<ManifestEntry> videos;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
std::string manifest_to_json(const DatasetManifest& manifest);

/// Half-open frame interval [start, end).
struct FrameInterval {
  std::size_t start = 0;
  std::size_t end = 0;
};

/// Abnormal frame intervals per video id.
using GroundTruth = std::map<std::string, std::vector<FrameInterval>>;

GroundTruth load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);
/// Per-frame 0/1 labels of length `frame_count`; unknown ids are all-normal.
std::vector<std::uint8_t> frame_labels(const GroundTruth& truth, const std::string& id, std::size_t frame_count);

struct Dataset {
  DatasetManifest manifest;
  std::vector<VideoRecord> records;

  std::size_t count(int label) const;
};

/// Loads a manifest and every feature file it references, checking that each
/// file has T_k = ceil(frame_count / delta) rows and d columns. A train split
/// must hold at least one normal and one abnormal video.
Dataset load_dataset(const std::filesystem::path& manifest_path);

}  // namespace vad::features
