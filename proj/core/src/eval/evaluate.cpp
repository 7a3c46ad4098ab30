// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/eval/evaluate.hpp"

#include <algorithm>
#include <cstdio>

#include "vad/error.hpp"
#include "vad/eval/metrics.hpp"

namespace vad::eval {

EvalResult evaluate(const features::Dataset& test, const features::GroundTruth& truth, mil::ModelParams& model,
                    const InferConfig& cfg, const nlohmann::json& model_metadata) {
  if (test.records.empty()) throw InvalidArgument("evaluate: test set is empty");
  EvalResult result;
  std::vector<float> scores;
  std::vector<float> binary;
  std::vector<std::uint8_t> labels;
  for (std::size_t v = 0; v < test.records.size(); ++v) {
    const features::VideoRecord& rec = test.records[v];
    ScoreTimeline t = infer_video(rec, model, cfg, v);
    std::vector<std::uint8_t> gt = features::frame_labels(truth, rec.id, rec.frame_count);

    VideoSummary s{rec.id, rec.label, rec.snippets(), rec.frame_count, 0.0, 0.0, 0.0};
    double flagged = 0.0;
    for (std::size_t f = 0; f < t.frame_scores.size(); ++f) {
      s.mean_score += t.frame_scores[f];
      s.max_score = std::max<double>(s.max_score, t.frame_scores[f]);
      flagged += t.frame_binary[f];
    }
    s.mean_score /= static_cast<double>(t.frame_scores.size());
    s.anomalous_fraction = flagged / static_cast<double>(t.frame_scores.size());
    result.report.videos.push_back(s);

    scores.insert(scores.end(), t.frame_scores.begin(), t.frame_scores.end());
    binary.insert(binary.end(), t.frame_binary.begin(), t.frame_binary.end());
    labels.insert(labels.end(), gt.begin(), gt.end());
    result.timelines.push_back(std::move(t));
    result.labels.push_back(std::move(gt));
  }

  EvalReport& r = result.report;
  r.frames = labels.size();
  r.positive_frames = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
  r.auc_roc = auc_roc(scores, labels);
  r.auc_pr = auc_pr(scores, labels);
  r.binary_auc_roc = auc_roc(binary, labels);
  r.config = {{"tsa_enabled", cfg.tsa_enabled},
              {"samples", cfg.tsa.samples},
              {"r", cfg.tsa.ratio},
              {"sigma_noise", cfg.tsa.sigma},
              {"eval_seed", cfg.eval_seed},
              {"delta", test.manifest.delta},
              {"videos", test.records.size()},
              {"model", model_metadata}};
  return result;
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::json videos = nlohmann::json::array();
  for (const VideoSummary& v : r.videos) {
    videos.push_back({{"id", v.id},
                      {"label", v.label},
                      {"snippets", v.snippets},
                      {"frames", v.frames},
                      {"mean_score", v.mean_score},
                      {"max_score", v.max_score},
                      {"anomalous_fraction", v.anomalous_fraction}});
  }
  const nlohmann::json j = {
      {"auc_roc", r.auc_roc},
      {"auc_pr", r.auc_pr},
      {"auc_pr_convention", "average precision: sum over distinct thresholds of precision x recall increment"},
      {"score_basis", "continuous unfolded frame scores; binary_auc_roc uses scores rounded at 0.5"},
      {"binary_auc_roc", r.binary_auc_roc},
      {"frames", r.frames},
      {"positive_frames", r.positive_frames},
      {"config", r.config},
      {"videos", videos}};
  return j.dump(2) + "\n";
}

void write_frame_csv(std::ostream& out, const EvalResult& result) {
  out << "video_id,frame_idx,score,binary,label\n";
  char buf[64];
  for (std::size_t v = 0; v < result.timelines.size(); ++v) {
    const ScoreTimeline& t = result.timelines[v];
    for (std::size_t f = 0; f < t.frame_scores.size(); ++f) {
      std::snprintf(buf, sizeof(buf), ",%zu,%.9g,%d,%d\n", f, static_cast<double>(t.frame_scores[f]),
                    static_cast<int>(t.frame_binary[f]), static_cast<int>(result.labels[v][f]));
      out << t.id << buf;
    }
  }
}

}  // namespace vad::eval
