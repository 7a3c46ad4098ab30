// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

namespace vad::eval {

/// Area under the ROC curve by a descending threshold sweep with trapezoids
/// between distinct thresholds, which equals the Mann-Whitney statistic with
/// ties counted as one half. Throws InvalidArgument unless both classes occur.
double auc_roc(std::span<const float> scores, std::span<const std::uint8_t> labels);

/// Average precision: sum over distinct thresholds, descending, of
/// precision times the recall gained at that threshold. Tied scores enter
/// together. Throws InvalidArgument when there is no positive label.
double auc_pr(std::span<const float> scores, std::span<const std::uint8_t> labels);

}  // namespace vad::eval
