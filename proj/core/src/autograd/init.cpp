// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/autograd/init.hpp"

#include <cmath>

namespace vad::ag {

Parameter xavier_uniform(std::string name, Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor value(std::move(shape));
  for (float& v : value.data()) v = static_cast<float>(rng.uniform(-bound, bound));
  return Parameter(std::move(name), std::move(value));
}

Parameter zeros(std::string name, Shape shape) { return Parameter(std::move(name), Tensor(std::move(shape))); }

}  // namespace vad::ag
