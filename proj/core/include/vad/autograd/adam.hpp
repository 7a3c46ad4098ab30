// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vad/autograd/tensor.hpp"

namespace vad::ag {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Classic L2 penalty: weight_decay * p is added to the gradient before the
  // moment updates.
  double weight_decay = 0.0;
};

struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;

  static AdamState for_parameters(std::span<Parameter* const> params, AdamConfig config);
};

/// One Adam update of every parameter from its accumulated `grad`.
/// Throws ShapeError if a parameter no longer matches its moment buffers.
void adam_step(std::span<Parameter* const> params, AdamState& state);

}  // namespace vad::ag
