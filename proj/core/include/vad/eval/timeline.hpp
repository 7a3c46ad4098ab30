// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vad/features/manifest.hpp"
#include "vad/mil/model.hpp"
#include "vad/tsa/attention.hpp"

namespace vad::eval {

/// Repeats each snippet score `delta` times in order. If the result is
/// shorter than `frames` the tail is padded with the last score; if longer it
/// is cut to `frames`. Requires frames >= delta * (T_k - 1), i.e. every
/// snippet covers at least one frame.
std::vector<float> unfold_scores(std::span<const float> scores, std::size_t delta, std::size_t frames);

struct ScoreTimeline {
  std::string id;
  std::vector<float> snippet_scores;
  std::vector<std::uint8_t> snippet_binary;
  std::vector<float> frame_scores;
  std::vector<std::uint8_t> frame_binary;
};

struct InferConfig {
  bool tsa_enabled = true;
  tsa::TsaConfig tsa;
  std::uint64_t eval_seed = 0;
};

/// Scores one video at its native length T_k (no temporal normalization):
/// TSA with kappa = floor(T_k * r), context module and classifier on an
/// inference graph (dropout off). `stream` picks the noise stream, so a
/// video's scores do not depend on which other videos are evaluated.
ScoreTimeline infer_video(const features::VideoRecord& record, mil::ModelParams& model, const InferConfig& cfg,
                          std::uint64_t stream = 0);

}  // namespace vad::eval
