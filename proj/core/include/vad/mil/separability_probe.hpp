// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vad/features/synthetic.hpp"

namespace vad::mil {

struct ProbeConfig {
  std::size_t length = 32;  // T
  std::size_t epsilon = 5;  // planted abnormal snippets per abnormal bag
  features::SyntheticConfig generator;
  std::uint64_t seed = 0;
};

struct ProbePoint {
  std::size_t alpha = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo estimate of the expected separability as a function of alpha
/// on raw features. Every trial draws one normal and one abnormal bag and
/// evaluates all alphas on that same pair, so differences between alphas are
/// paired.
struct ProbeResult {
  std::vector<ProbePoint> points;
  std::vector<std::vector<double>> samples;  // [alpha index][trial]

  /// Mean and standard error of samples[b] - samples[a].
  ProbePoint difference(std::size_t a, std::size_t b) const;
};

ProbeResult probe_separability(const ProbeConfig& cfg, std::span<const std::size_t> alphas, std::size_t trials);

}  // namespace vad::mil
