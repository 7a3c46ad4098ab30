// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vad/autograd/tensor.hpp"
#include "vad/features/manifest.hpp"
#include "vad/rng.hpp"

namespace vad::mil {

/// 2B bags of [T x d] features: bags [0, B) are normal, [B, 2B) abnormal.
struct BatchLayout {
  std::size_t half = 0;  // B
  std::size_t length = 0;
  std::size_t dim = 0;
  ag::Tensor bags;  // [2B x T x d]
  std::vector<int> labels;
  std::vector<std::string> ids;

  std::size_t size() const { return 2 * half; }
  /// Bag `i` as a [T x d] matrix.
  ag::Tensor bag(std::size_t i) const;
};

/// Samples B normal and B abnormal videos (without replacement when each
/// class has at least B videos, with replacement otherwise), normalizes them
/// to `length` snippets and stacks normal-then-abnormal.
BatchLayout build_batch(const features::Dataset& train, std::size_t half, std::size_t length, Rng& rng);

}  // namespace vad::mil
