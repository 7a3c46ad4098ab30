// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/autograd/adam.hpp"

#include <cmath>

#include "vad/error.hpp"

namespace vad::ag {

AdamState AdamState::for_parameters(std::span<Parameter* const> params, AdamConfig config) {
  AdamState state;
  state.config = config;
  for (const Parameter* p : params) {
    state.first_moment.emplace_back(p->value.shape());
    state.second_moment.emplace_back(p->value.shape());
  }
  return state;
}

void adam_step(std::span<Parameter* const> params, AdamState& state) {
  if (params.size() != state.first_moment.size()) {
    throw ShapeError("adam_step: parameter count changed since the optimizer state was created");
  }
  const AdamConfig& cfg = state.config;
  const std::uint64_t t = state.step + 1;
  const double bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));

  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    Tensor& m = state.first_moment[i];
    Tensor& v = state.second_moment[i];
    if (p.value.shape() != m.shape() || p.grad.shape() != m.shape()) {
      throw ShapeError("adam_step: parameter '" + p.name + "' drifted from shape " + shape_string(m.shape()));
    }
    auto w = p.value.data();
    auto g = p.grad.data();
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double grad = static_cast<double>(g[k]) + cfg.weight_decay * w[k];
      const double mk = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * grad;
      const double vk = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * grad * grad;
      m[k] = static_cast<float>(mk);
      v[k] = static_cast<float>(vk);
      const double update = cfg.lr * (mk / bias1) / (std::sqrt(vk / bias2) + cfg.eps);
      w[k] = static_cast<float>(w[k] - update);
    }
    if (!p.value.all_finite()) throw NumericError("adam_step: parameter '" + p.name + "' became non-finite");
  }
  state.step = t;
}

}  // namespace vad::ag
