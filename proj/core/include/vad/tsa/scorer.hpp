// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "vad/autograd/graph.hpp"
#include "vad/autograd/tensor.hpp"
#include "vad/rng.hpp"

namespace vad::tsa {

/// Temporal scorer: d -> hidden1 -> hidden2 -> 1, ReLU on the hidden layers
/// and a sigmoid on the output, so every snippet score lies in (0, 1).
struct ScorerParams {
  ag::Parameter w1, b1, w2, b2, w3, b3;

  static ScorerParams init(std::size_t d, std::size_t hidden1, std::size_t hidden2, Rng& rng);
  std::vector<ag::Parameter*> parameters();
  std::size_t input_dim() const { return w1.value.dim(0); }
};

/// Scores every row of an [n x d] feature matrix; returns [n x 1].
ag::Var score_snippets(const ag::Var& features, ScorerParams& params);

}  // namespace vad::tsa
