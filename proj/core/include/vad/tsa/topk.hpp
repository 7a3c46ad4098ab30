// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vad/autograd/tensor.hpp"
#include "vad/rng.hpp"

namespace vad::tsa {

/// floor(length * ratio), clamped to at least 1. Requires 0 < ratio <= 1.
std::size_t kappa_from_ratio(std::size_t length, double ratio);

/// Monte-Carlo average of per-rank one-hot vectors: entry (k, i) is the
/// fraction of perturbed samples in which snippet i held rank k.
struct SoftSelection {
  std::size_t kappa = 0;
  std::size_t length = 0;
  std::size_t samples = 0;
  std::vector<std::uint32_t> counts;  // kappa x length

  double weight(std::size_t rank, std::size_t index) const {
    return static_cast<double>(counts[rank * length + index]) / static_cast<double>(samples);
  }
  /// The kappa x length matrix of weights.
  ag::Tensor matrix() const;
  /// Summed weight over ranks per snippet, i.e. its inclusion frequency.
  /// Computed from integer counts, so a snippet picked in every sample gets
  /// exactly 1.
  std::vector<double> inclusion() const;
};

/// Forward-pass draws kept for the selection gradient.
struct PerturbationDraws {
  std::size_t samples = 0;
  std::size_t length = 0;
  double sigma = 0.0;
  std::vector<double> noise;            // samples x length standard normals (empty when sigma == 0)
  std::vector<std::uint8_t> included;  // samples x length top-kappa indicators

  bool empty() const { return included.empty(); }
};

struct TopKResult {
  SoftSelection selection;
  PerturbationDraws draws;
};

/// Perturbed top-kappa nominator. Each of `samples` clones of `scores` gets
/// i.i.d. N(0, sigma^2) noise; the kappa largest perturbed scores are ranked
/// in descending order (ties to the lower index) and one-hot encoded.
TopKResult topk_score(std::size_t samples, std::size_t kappa, std::span<const float> scores, double sigma, Rng& rng);

/// Indices of the kappa largest entries, descending, ties to the lower index.
std::vector<std::size_t> hard_topk(std::span<const double> scores, std::size_t kappa);

/// Perturbed-optimizer estimate of d p_i / d score_j, where p is the expected
/// inclusion indicator: the sample covariance of the indicators with the
/// standard-normal draws, divided by sigma. Returned row-major, length x
/// length. Zero when sigma == 0 or samples < 2.
std::vector<double> selection_jacobian(const PerturbationDraws& draws);

/// upstream^T * selection_jacobian(draws), computed without forming the matrix.
std::vector<double> selection_vjp(const PerturbationDraws& draws, std::span<const double> upstream);

}  // namespace vad::tsa
