// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/features/manifest.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "vad/error.hpp"
#include "vad/features/feature_file.hpp"

namespace vad::features {

using nlohmann::json;

std::size_t snippet_count(std::size_t frame_count, std::size_t snippet_len) {
  if (snippet_len == 0) throw InvalidArgument("snippet length must be positive");
  return (frame_count + snippet_len - 1) / snippet_len;
}

std::string manifest_to_json(const DatasetManifest& m) {
  json videos = json::array();
  for (const ManifestEntry& e : m.videos) {
    videos.push_back({{"id", e.id}, {"path", e.path}, {"label", e.label}, {"frame_count", e.frame_count}});
  }
  json doc = {{"version", m.version}, {"d", m.d}, {"delta", m.delta}, {"split", m.split}, {"videos", videos}};
  return doc.dump(2) + "\n";
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  write_file(path, manifest_to_json(manifest));
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  DatasetManifest m;
  try {
    const json doc = json::parse(read_file(path));
    m.version = doc.at("version").get<std::uint32_t>();
    m.d = doc.at("d").get<std::size_t>();
    m.delta = doc.at("delta").get<std::size_t>();
    m.split = doc.at("split").get<std::string>();
    for (const json& v : doc.at("videos")) {
      ManifestEntry e;
      e.id = v.at("id").get<std::string>();
      e.path = v.at("path").get<std::string>();
      e.label = v.at("label").get<int>();
      e.frame_count = v.at("frame_count").get<std::size_t>();
      m.videos.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": malformed manifest: " + e.what());
  }
  if (m.version != 1) throw FormatError(path.string() + ": unsupported manifest version " + std::to_string(m.version));
  if (m.d == 0 || m.delta == 0) throw FormatError(path.string() + ": d and delta must be positive");
  for (const ManifestEntry& e : m.videos) {
    if (e.label != 0 && e.label != 1) throw FormatError(path.string() + ": label of '" + e.id + "' is not 0/1");
    if (e.frame_count == 0) throw FormatError(path.string() + ": frame_count of '" + e.id + "' is zero");
  }
  return m;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  GroundTruth truth;
  try {
    const json doc = json::parse(read_file(path));
    for (const auto& [id, intervals] : doc.items()) {
      auto& list = truth[id];
      for (const json& iv : intervals) {
        const auto start = iv.at(0).get<std::size_t>();
        const auto end = iv.at(1).get<std::size_t>();
        if (end < start) throw FormatError(path.string() + ": interval end before start for '" + id + "'");
        list.push_back({start, end});
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": malformed ground truth: " + e.what());
  }
  return truth;
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  json doc = json::object();
  for (const auto& [id, intervals] : truth) {
    json list = json::array();
    for (const FrameInterval& iv : intervals) list.push_back({iv.start, iv.end});
    doc[id] = list;
  }
  write_file(path, doc.dump(2) + "\n");
}

std::vector<std::uint8_t> frame_labels(const GroundTruth& truth, const std::string& id, std::size_t frame_count) {
  std::vector<std::uint8_t> labels(frame_count, 0);
  const auto it = truth.find(id);
  if (it == truth.end()) return labels;
  for (const FrameInterval& iv : it->second) {
    for (std::size_t f = iv.start; f < std::min(iv.end, frame_count); ++f) labels[f] = 1;
  }
  return labels;
}

std::size_t Dataset::count(int label) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [label](const VideoRecord& r) { return r.label == label; }));
}

Dataset load_dataset(const std::filesystem::path& manifest_path) {
  Dataset ds;
  ds.manifest = load_manifest(manifest_path);
  const std::filesystem::path base = manifest_path.parent_path();
  for (const ManifestEntry& e : ds.manifest.videos) {
    VideoRecord rec;
    rec.id = e.id;
    rec.label = e.label;
    rec.frame_count = e.frame_count;
    rec.snippet_len = ds.manifest.delta;
    const std::filesystem::path file = base / e.path;
    rec.features = load_features(file);
    const std::size_t expected = snippet_count(e.frame_count, ds.manifest.delta);
    if (rec.features.dim(0) != expected || rec.features.dim(1) != ds.manifest.d) {
      throw FormatError(file.string() + ": header (" + std::to_string(rec.features.dim(0)) + " x " +
                        std::to_string(rec.features.dim(1)) + ") does not match manifest (" +
                        std::to_string(expected) + " x " + std::to_string(ds.manifest.d) + ")");
    }
    ds.records.push_back(std::move(rec));
  }
  if (ds.manifest.split == "train" && (ds.count(0) == 0 || ds.count(1) == 0)) {
    throw FormatError(manifest_path.string() + ": a train split needs at least one normal and one abnormal video");
  }
  return ds;
}

}  // namespace vad::features
