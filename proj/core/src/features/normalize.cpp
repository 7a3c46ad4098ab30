// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/features/normalize.hpp"

#include <vector>

#include "vad/error.hpp"

namespace vad::features {

ag::Tensor temporal_normalize(const ag::Tensor& features, std::size_t target_len) {
  if (features.rank() != 2 || features.dim(0) == 0) {
    throw InvalidArgument("temporal_normalize: expected a non-empty [T_k x d] matrix, got " +
                          ag::shape_string(features.shape()));
  }
  if (target_len == 0) throw InvalidArgument("temporal_normalize: target length must be positive");

  const std::size_t len = features.dim(0);
  const std::size_t d = features.dim(1);
  ag::Tensor out({target_len, d});

  if (len < target_len) {
    for (std::size_t i = 0; i < target_len; ++i) {
      const std::size_t src = ((2 * i + 1) * len) / (2 * target_len);
      for (std::size_t j = 0; j < d; ++j) out.at(i, j) = features.at(src, j);
    }
    return out;
  }

  std::vector<double> acc(d);
  for (std::size_t i = 0; i < target_len; ++i) {
    const std::size_t begin = (i * len) / target_len;
    const std::size_t end = ((i + 1) * len) / target_len;
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t r = begin; r < end; ++r)
      for (std::size_t j = 0; j < d; ++j) acc[j] += features.at(r, j);
    const auto count = static_cast<double>(end - begin);
    for (std::size_t j = 0; j < d; ++j) out.at(i, j) = static_cast<float>(acc[j] / count);
  }
  return out;
}

}  // namespace vad::features
