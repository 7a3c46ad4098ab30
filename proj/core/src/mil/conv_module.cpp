// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/mil/conv_module.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vad/autograd/init.hpp"
#include "vad/autograd/ops.hpp"
#include "vad/error.hpp"

namespace vad::mil {
namespace {

constexpr std::size_t kTaps = 3;

std::size_t branch_width(std::size_t d) {
  if (d < 4 || d % 4 != 0) throw InvalidArgument("conv module needs d divisible by 4, got " + std::to_string(d));
  return d / 4;
}

std::size_t inner_width(std::size_t branch) { return std::max<std::size_t>(1, branch / 2); }

}  // namespace

ConvModuleParams ConvModuleParams::init(std::size_t d, Rng& rng) {
  const std::size_t c = branch_width(d);
  const std::size_t inner = inner_width(c);
  ConvModuleParams p;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string tag = "conv.branch" + std::to_string(k);
    p.branch_w[k] = ag::xavier_uniform(tag + ".w", {kTaps, d, c}, kTaps * d, kTaps * c, rng);
    p.branch_b[k] = ag::zeros(tag + ".b", {c});
  }
  p.reduce_w = ag::xavier_uniform("conv.nonlocal.reduce_w", {d, c}, d, c, rng);
  p.reduce_b = ag::zeros("conv.nonlocal.reduce_b", {c});
  p.theta = ag::xavier_uniform("conv.nonlocal.theta", {c, inner}, c, inner, rng);
  p.phi = ag::xavier_uniform("conv.nonlocal.phi", {c, inner}, c, inner, rng);
  p.value = ag::xavier_uniform("conv.nonlocal.value", {c, inner}, c, inner, rng);
  p.project = ag::xavier_uniform("conv.nonlocal.project", {inner, c}, inner, c, rng);
  return p;
}

ConvModuleParams ConvModuleParams::zeros(std::size_t d) {
  Rng unused(0);
  ConvModuleParams p = init(d, unused);
  for (ag::Parameter* param : p.parameters()) param->value.fill(0.0f);
  return p;
}

std::vector<ag::Parameter*> ConvModuleParams::parameters() {
  std::vector<ag::Parameter*> out;
  for (std::size_t k = 0; k < 3; ++k) {
    out.push_back(&branch_w[k]);
    out.push_back(&branch_b[k]);
  }
  for (ag::Parameter* p : {&reduce_w, &reduce_b, &theta, &phi, &value, &project}) out.push_back(p);
  return out;
}

ag::Var conv_module_forward(const ag::Var& bag, ConvModuleParams& p) {
  const ag::Tensor& x = bag.value();
  if (x.rank() != 2 || x.dim(1) != p.dim()) {
    throw ShapeError("conv module expects [T x " + std::to_string(p.dim()) + "], got " + ag::shape_string(x.shape()));
  }
  ag::Graph& g = bag.graph();
  std::vector<ag::Var> branches;
  for (std::size_t k = 0; k < 3; ++k) {
    ag::Var y = ag::conv1d_dilated(bag, g.parameter(p.branch_w[k]), kBranchDilations[k]);
    branches.push_back(ag::relu(ag::add_bias(y, g.parameter(p.branch_b[k]))));
  }

  // Embedded-Gaussian non-local block on a d/4-channel reduction.
  const ag::Var reduced = ag::relu(ag::add_bias(ag::matmul(bag, g.parameter(p.reduce_w)), g.parameter(p.reduce_b)));
  const ag::Var theta = ag::matmul(reduced, g.parameter(p.theta));
  const ag::Var phi = ag::matmul(reduced, g.parameter(p.phi));
  const ag::Var value = ag::matmul(reduced, g.parameter(p.value));
  const ag::Var affinity = ag::softmax_rows(ag::matmul(theta, ag::transpose(phi)));
  const ag::Var context = ag::matmul(ag::matmul(affinity, value), g.parameter(p.project));
  branches.push_back(ag::add(context, reduced));

  return ag::add(ag::concat_cols(branches), bag);
}

std::vector<ag::Var> conv_module_forward(std::span<const ag::Var> bags, ConvModuleParams& params) {
  std::vector<ag::Var> out;
  out.reserve(bags.size());
  for (const ag::Var& bag : bags) out.push_back(conv_module_forward(bag, params));
  return out;
}

}  // namespace vad::mil
