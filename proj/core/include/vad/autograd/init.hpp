// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

#include "vad/autograd/tensor.hpp"
#include "vad/rng.hpp"

namespace vad::ag {

/// U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
Parameter xavier_uniform(std::string name, Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng);

Parameter zeros(std::string name, Shape shape);

}  // namespace vad::ag
