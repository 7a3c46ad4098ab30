// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "vad/autograd/graph.hpp"
#include "vad/autograd/tensor.hpp"
#include "vad/rng.hpp"
#include "vad/tsa/scorer.hpp"
#include "vad/tsa/topk.hpp"

namespace vad::tsa {

enum class SelectionGradient {
  // Monte-Carlo perturbed-optimizer Jacobian over the forward draws.
  kPerturbed,
  // Identity on the hard top-kappa entries of the unperturbed scores.
  kStraightThrough,
};

struct TsaConfig {
  std::size_t samples = 100;
  double ratio = 0.7;
  double sigma = 0.05;
  SelectionGradient gradient = SelectionGradient::kPerturbed;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Records the top-kappa nominator as a graph op. `scores` is [T x 1]; the
/// output is the [T x 1] per-snippet inclusion weight (column sums of the
/// soft selection). The soft selection is copied to `selection_out` if given.
ag::Var perturbed_selection(const ag::Var& scores, std::size_t kappa, const TsaConfig& cfg, Rng& rng,
                            SoftSelection* selection_out = nullptr);

struct TsaOutput {
  ag::Var attention;  // [T x d] reweighed features
  ag::Var scores;     // [T x 1] scorer output
  ag::Var weights;    // [T x 1] inclusion weights
  SoftSelection selection;
};

/// Scores the snippets, nominates kappa = floor(T * ratio) of them under
/// Gaussian perturbation and scales each feature row by its summed selection
/// weight.
TsaOutput tsa_forward(const ag::Var& features, ScorerParams& scorer, const TsaConfig& cfg, Rng& rng);

/// Fusion as a per-row scale by the column sums of the soft selection.
ag::Tensor fuse(const SoftSelection& selection, const ag::Tensor& features);

/// Fusion spelled out: clone the selection over d and the features over
/// kappa, multiply elementwise, then sum over kappa.
ag::Tensor fuse_by_cloning(const SoftSelection& selection, const ag::Tensor& features);

}  // namespace vad::tsa
