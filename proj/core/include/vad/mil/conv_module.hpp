// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "vad/autograd/graph.hpp"
#include "vad/rng.hpp"

namespace vad::mil {

inline constexpr std::array<std::size_t, 3> kBranchDilations = {1, 2, 4};

/// Temporal context module: three dilated kernel-3 convolutions (dilations
/// 1, 2, 4) and an embedded-Gaussian non-local branch, each producing d/4
/// channels. The four branch outputs are concatenated back to d channels and
/// added to the input.
struct ConvModuleParams {
  std::array<ag::Parameter, 3> branch_w;  // [3 x d x d/4]
  std::array<ag::Parameter, 3> branch_b;  // [d/4]
  ag::Parameter reduce_w, reduce_b;       // [d x d/4], [d/4]
  ag::Parameter theta, phi, value;        // [d/4 x inner]
  ag::Parameter project;                  // [inner x d/4]

  static ConvModuleParams init(std::size_t d, Rng& rng);
  /// Every weight and bias zero; the module is then the identity map.
  static ConvModuleParams zeros(std::size_t d);
  std::vector<ag::Parameter*> parameters();
  std::size_t dim() const { return reduce_w.value.dim(0); }
};

/// Applies the module to one [T x d] bag.
ag::Var conv_module_forward(const ag::Var& bag, ConvModuleParams& params);

/// Applies the module to each bag independently.
std::vector<ag::Var> conv_module_forward(std::span<const ag::Var> bags, ConvModuleParams& params);

}  // namespace vad::mil
