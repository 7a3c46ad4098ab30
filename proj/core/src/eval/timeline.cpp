// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/eval/timeline.hpp"

#include "vad/error.hpp"

namespace vad::eval {

std::vector<float> unfold_scores(std::span<const float> scores, std::size_t delta, std::size_t frames) {
  const std::size_t n = scores.size();
  if (n == 0) throw InvalidArgument("unfold_scores: empty score vector");
  if (delta == 0) throw InvalidArgument("unfold_scores: snippet length must be positive");
  if (frames == 0 || frames < delta * (n - 1) + 1) {
    throw InvalidArgument("unfold_scores: " + std::to_string(frames) + " frames cannot hold " + std::to_string(n) +
                          " snippets of " + std::to_string(delta) + " frames");
  }
  std::vector<float> out;
  out.reserve(frames);
  for (std::size_t i = 0; i < n && out.size() < frames; ++i) {
    for (std::size_t r = 0; r < delta && out.size() < frames; ++r) out.push_back(scores[i]);
  }
  out.resize(frames, scores[n - 1]);
  return out;
}

ScoreTimeline infer_video(const features::VideoRecord& record, mil::ModelParams& model, const InferConfig& cfg,
                          std::uint64_t stream) {
  if (record.dim() != model.shape.d) {
    throw InvalidArgument("infer_video: video " + record.id + " has d = " + std::to_string(record.dim()) +
                          " but the model expects " + std::to_string(model.shape.d));
  }
  ag::Graph graph(false);
  const ag::Var bag = graph.constant(record.features);
  Rng noise_rng(cfg.eval_seed, (static_cast<std::uint64_t>(Stream::kEvalNoise) << 32) | stream);
  Rng dropout_rng(cfg.eval_seed, Stream::kDropout);
  const mil::ForwardConfig fwd{cfg.tsa_enabled, cfg.tsa, 0.0f};
  const mil::BagOutputs out = mil::forward_bags({&bag, 1}, model, fwd, noise_rng, dropout_rng);

  ScoreTimeline t;
  t.id = record.id;
  const ag::Tensor& u = out.scores[0].value();
  t.snippet_scores.assign(u.data().begin(), u.data().end());
  for (float s : t.snippet_scores) t.snippet_binary.push_back(s >= 0.5f ? 1 : 0);
  t.frame_scores = unfold_scores(t.snippet_scores, record.snippet_len, record.frame_count);
  std::vector<float> binary(t.snippet_binary.begin(), t.snippet_binary.end());
  for (float b : unfold_scores(binary, record.snippet_len, record.frame_count)) t.frame_binary.push_back(b > 0.5f);
  return t;
}

}  // namespace vad::eval
