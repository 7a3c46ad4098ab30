// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vad/autograd/graph.hpp"
#include "vad/autograd/tensor.hpp"

namespace vad::mil {

/// Rows of a [T x d] matrix with the `alpha` largest l2 norms, descending,
/// ties to the lower index.
std::vector<std::size_t> top_alpha_rows(const ag::Tensor& features, std::size_t alpha);

/// Mean of the top-alpha rows by feature magnitude, as a d-vector.
std::vector<double> top_alpha_mean(const ag::Tensor& features, std::size_t alpha);
/// Graph version; [1 x d], gradient flows into the selected rows only.
ag::Var top_alpha_mean(const ag::Var& features, std::size_t alpha);

/// ||top_alpha_mean(positive)|| - ||top_alpha_mean(negative)||.
double separability(const ag::Tensor& positive, const ag::Tensor& negative, std::size_t alpha);
ag::Var separability(const ag::Var& positive, const ag::Var& negative, std::size_t alpha);

/// Which snippets make up a video's score in the BCE term.
enum class VideoScore {
  kTopMagnitude,  // the top-alpha snippets by feature magnitude, as in the margin term
  kTopScore,      // the top-alpha snippets by classifier score
};

struct DmtConfig {
  std::size_t alpha = 3;
  double margin = 100.0;
  double margin_weight = 1.0;
  double bce_weight = 1.0;
  VideoScore video_score = VideoScore::kTopMagnitude;
};

struct DmtLoss {
  ag::Var total;
  ag::Var margin;  // mean hinge over every (abnormal, normal) bag pair
  ag::Var bce;     // mean BCE of per-video scores against video labels
};

/// Difference-maximization objective over a 2B batch laid out normal-then-
/// abnormal. `features` are the per-bag [T x d] outputs of the context module,
/// `scores` the per-bag [T x 1] classifier outputs. The margin term averages
/// max(0, m - ||lambda(F+_i)|| + ||lambda(F-_j)||) over all B*B pairs; a
/// video's score is the mean of its top-alpha snippet scores (see VideoScore).
DmtLoss dmt_loss(std::span<const ag::Var> features, std::span<const ag::Var> scores, std::span<const int> labels,
                 const DmtConfig& cfg);

}  // namespace vad::mil
