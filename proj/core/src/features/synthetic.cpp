// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/features/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>

#include "vad/error.hpp"
#include "vad/features/feature_file.hpp"

namespace vad::features {

void SyntheticConfig::validate() const {
  if (d == 0 || delta == 0) throw InvalidArgument("synthetic: d and delta must be positive");
  if (min_frames == 0 || min_frames > max_frames) throw InvalidArgument("synthetic: invalid frame-count range");
  if (epsilon_min < 1 || epsilon_min > epsilon_max) throw InvalidArgument("synthetic: invalid epsilon range");
  if (epsilon_max > min_frames / delta) {
    throw InvalidArgument("synthetic: epsilon_max " + std::to_string(epsilon_max) +
                          " exceeds the whole-snippet count of the shortest video (" +
                          std::to_string(min_frames / delta) + ")");
  }
  if (!(noise_std >= 0.0) || !(anomaly_shift >= 0.0) || !(base_scale >= 0.0)) {
    throw InvalidArgument("synthetic: noise_std, anomaly_shift and base_scale must be non-negative");
  }
}

SyntheticConfig default_synthetic_config(std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.seed = seed;
  cfg.anomaly_shift = 1.5 * cfg.noise_std * std::sqrt(static_cast<double>(cfg.d));
  return cfg;
}

SyntheticConfig hard_synthetic_config(std::uint64_t seed) {
  SyntheticConfig cfg = default_synthetic_config(seed);
  cfg.anomaly_shift = 0.35 * cfg.noise_std * std::sqrt(static_cast<double>(cfg.d));
  return cfg;
}

SnippetSampler::SnippetSampler(const SyntheticConfig& cfg)
    : noise_std_(cfg.noise_std), base_(cfg.d), shift_(cfg.d) {
  Rng rng(cfg.seed, Stream::kSynthetic);
  const double per_coord = cfg.anomaly_shift / std::sqrt(static_cast<double>(cfg.d));
  for (std::size_t j = 0; j < cfg.d; ++j) {
    base_[j] = cfg.base_scale * rng.normal();
    shift_[j] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * per_coord;
  }
}

void SnippetSampler::normal(Rng& rng, std::span<float> out) const {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = static_cast<float>(base_[j] + noise_std_ * rng.normal());
}

void SnippetSampler::abnormal(Rng& rng, std::span<float> out) const {
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = static_cast<float>(base_[j] + shift_[j] + noise_std_ * rng.normal());
  }
}

namespace {

SyntheticSplit make_split(const SyntheticConfig& cfg, const SnippetSampler& sampler, const std::string& split,
                          Rng& rng) {
  SyntheticSplit out;
  out.manifest.d = cfg.d;
  out.manifest.delta = cfg.delta;
  out.manifest.split = split;

  const auto make_video = [&](int label, std::size_t index) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%s%04zu", split.c_str(), label == 1 ? "abnormal" : "normal", index);
    VideoRecord rec;
    rec.id = name;
    rec.label = label;
    rec.snippet_len = cfg.delta;
    rec.frame_count = static_cast<std::size_t>(
        rng.integer(static_cast<std::int64_t>(cfg.min_frames), static_cast<std::int64_t>(cfg.max_frames)));
    const std::size_t snippets = snippet_count(rec.frame_count, cfg.delta);
    std::size_t begin = 0, end = 0;
    if (label == 1) {
      const auto eps = static_cast<std::size_t>(
          rng.integer(static_cast<std::int64_t>(cfg.epsilon_min), static_cast<std::int64_t>(cfg.epsilon_max)));
      const std::size_t whole = rec.frame_count / cfg.delta;
      begin = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(whole - eps)));
      end = begin + eps;
    }
    rec.features = ag::Tensor({snippets, cfg.d});
    for (std::size_t t = 0; t < snippets; ++t) {
      auto row = rec.features.data().subspan(t * cfg.d, cfg.d);
      if (t >= begin && t < end) {
        sampler.abnormal(rng, row);
      } else {
        sampler.normal(rng, row);
      }
    }
    auto& intervals = out.truth[rec.id];
    if (label == 1) intervals.push_back({begin * cfg.delta, end * cfg.delta});
    out.manifest.videos.push_back({rec.id, "features/" + split + "/" + rec.id + ".vadf", label, rec.frame_count});
    out.records.push_back(std::move(rec));
  };

  for (std::size_t i = 0; i < cfg.n_normal; ++i) make_video(0, i);
  for (std::size_t i = 0; i < cfg.n_abnormal; ++i) make_video(1, i);
  return out;
}

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  const SnippetSampler sampler(cfg);
  SyntheticDataset data;
  data.config = cfg;
  Rng train_rng(cfg.seed, 1000 + static_cast<std::uint64_t>(Stream::kSynthetic));
  Rng test_rng(cfg.seed, 2000 + static_cast<std::uint64_t>(Stream::kSynthetic));
  data.train = make_split(cfg, sampler, "train", train_rng);
  data.test = make_split(cfg, sampler, "test", test_rng);
  return data;
}

void write_synthetic(const SyntheticDataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const SyntheticSplit* split : {&data.train, &data.test}) {
    for (std::size_t i = 0; i < split->records.size(); ++i) {
      save_features(split->records[i].features, dir / split->manifest.videos[i].path);
    }
  }
  save_manifest(data.train.manifest, dir / kTrainManifestName);
  save_manifest(data.test.manifest, dir / kTestManifestName);
  save_ground_truth(data.test.truth, dir / kGroundTruthName);

  const SyntheticConfig& c = data.config;
  const nlohmann::json echo = {
      {"n_normal", c.n_normal},       {"n_abnormal", c.n_abnormal},   {"d", c.d},
      {"delta", c.delta},             {"min_frames", c.min_frames},   {"max_frames", c.max_frames},
      {"epsilon_min", c.epsilon_min}, {"epsilon_max", c.epsilon_max}, {"anomaly_shift", c.anomaly_shift},
      {"noise_std", c.noise_std},     {"base_scale", c.base_scale},   {"seed", c.seed}};
  write_file(dir / "generator.json", echo.dump(2) + "\n");
}

}  // namespace vad::features
