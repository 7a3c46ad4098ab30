// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "vad/autograd/graph.hpp"
#include "vad/rng.hpp"

namespace vad::mil {

/// Snippet classifier d -> hidden1 -> hidden2 -> 1 with ReLU and dropout after
/// each hidden layer and a sigmoid output.
struct ClassifierParams {
  ag::Parameter w1, b1, w2, b2, w3, b3;

  static ClassifierParams init(std::size_t d, std::size_t hidden1, std::size_t hidden2, Rng& rng);
  std::vector<ag::Parameter*> parameters();
};

/// [n x d] -> [n x 1] scores in (0, 1). Dropout is active only on training graphs.
ag::Var classify(const ag::Var& features, ClassifierParams& params, float dropout, Rng& rng);

}  // namespace vad::mil
