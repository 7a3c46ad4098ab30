// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vad/eval/timeline.hpp"
#include "vad/features/manifest.hpp"
#include "vad/mil/model.hpp"

namespace vad::eval {

struct VideoSummary {
  std::string id;
  int label = 0;
  std::size_t snippets = 0;
  std::size_t frames = 0;
  double mean_score = 0.0;
  double max_score = 0.0;
  double anomalous_fraction = 0.0;  // share of frames flagged by the binary scores
};

/// Frame-level metrics are computed on continuous scores; the binary AUC is
/// reported alongside for reference only.
struct EvalReport {
  double auc_roc = 0.0;
  double auc_pr = 0.0;
  double binary_auc_roc = 0.0;
  std::size_t frames = 0;
  std::size_t positive_frames = 0;
  std::vector<VideoSummary> videos;
  nlohmann::json config;  // echo of the inference settings and model metadata
};

struct EvalResult {
  EvalReport report;
  std::vector<ScoreTimeline> timelines;
  std::vector<std::vector<std::uint8_t>> labels;  // per-frame ground truth, per video
};

/// Scores every video of `test` in manifest order and concatenates the frame
/// timelines before computing metrics. Video i uses noise stream i.
EvalResult evaluate(const features::Dataset& test, const features::GroundTruth& truth, mil::ModelParams& model,
                    const InferConfig& cfg, const nlohmann::json& model_metadata = nlohmann::json::object());

/// Serialized report. Contains no timing, so equal inputs give equal bytes.
std::string report_to_json(const EvalReport& report);

/// video_id,frame_idx,score,binary,label
void write_frame_csv(std::ostream& out, const EvalResult& result);

}  // namespace vad::eval
