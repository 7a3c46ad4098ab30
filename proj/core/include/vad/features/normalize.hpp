// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "vad/autograd/tensor.hpp"

namespace vad::features {

/// Resamples a [T_k x d] snippet-feature matrix to exactly `target_len` rows.
///
/// For T_k >= target_len, output row i (0-based) is the mean of input rows
/// [floor(g * i), floor(g * (i + 1))) with g = T_k / target_len; the chunks
/// tile the input without overlap, so T_k == target_len is the identity.
/// For T_k < target_len each output row copies its nearest input row,
/// floor((i + 1/2) * T_k / target_len).
ag::Tensor temporal_normalize(const ag::Tensor& features, std::size_t target_len);

}  // namespace vad::features
