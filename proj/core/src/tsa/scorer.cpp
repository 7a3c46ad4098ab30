// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/tsa/scorer.hpp"

#include "vad/autograd/init.hpp"
#include "vad/autograd/ops.hpp"

namespace vad::tsa {

ScorerParams ScorerParams::init(std::size_t d, std::size_t hidden1, std::size_t hidden2, Rng& rng) {
  ScorerParams p;
  p.w1 = ag::xavier_uniform("scorer.w1", {d, hidden1}, d, hidden1, rng);
  p.b1 = ag::zeros("scorer.b1", {hidden1});
  p.w2 = ag::xavier_uniform("scorer.w2", {hidden1, hidden2}, hidden1, hidden2, rng);
  p.b2 = ag::zeros("scorer.b2", {hidden2});
  p.w3 = ag::xavier_uniform("scorer.w3", {hidden2, 1}, hidden2, 1, rng);
  p.b3 = ag::zeros("scorer.b3", {1});
  return p;
}

std::vector<ag::Parameter*> ScorerParams::parameters() { return {&w1, &b1, &w2, &b2, &w3, &b3}; }

ag::Var score_snippets(const ag::Var& features, ScorerParams& p) {
  ag::Graph& g = features.graph();
  ag::Var h = ag::relu(ag::add_bias(ag::matmul(features, g.parameter(p.w1)), g.parameter(p.b1)));
  h = ag::relu(ag::add_bias(ag::matmul(h, g.parameter(p.w2)), g.parameter(p.b2)));
  return ag::sigmoid(ag::add_bias(ag::matmul(h, g.parameter(p.w3)), g.parameter(p.b3)));
}

}  // namespace vad::tsa
