// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/mil/classifier.hpp"

#include "vad/autograd/init.hpp"
#include "vad/autograd/ops.hpp"

namespace vad::mil {

ClassifierParams ClassifierParams::init(std::size_t d, std::size_t hidden1, std::size_t hidden2, Rng& rng) {
  ClassifierParams p;
  p.w1 = ag::xavier_uniform("classifier.w1", {d, hidden1}, d, hidden1, rng);
  p.b1 = ag::zeros("classifier.b1", {hidden1});
  p.w2 = ag::xavier_uniform("classifier.w2", {hidden1, hidden2}, hidden1, hidden2, rng);
  p.b2 = ag::zeros("classifier.b2", {hidden2});
  p.w3 = ag::xavier_uniform("classifier.w3", {hidden2, 1}, hidden2, 1, rng);
  p.b3 = ag::zeros("classifier.b3", {1});
  return p;
}

std::vector<ag::Parameter*> ClassifierParams::parameters() { return {&w1, &b1, &w2, &b2, &w3, &b3}; }

ag::Var classify(const ag::Var& features, ClassifierParams& p, float dropout, Rng& rng) {
  ag::Graph& g = features.graph();
  ag::Var h = ag::relu(ag::add_bias(ag::matmul(features, g.parameter(p.w1)), g.parameter(p.b1)));
  h = ag::dropout(h, dropout, rng);
  h = ag::relu(ag::add_bias(ag::matmul(h, g.parameter(p.w2)), g.parameter(p.b2)));
  h = ag::dropout(h, dropout, rng);
  return ag::sigmoid(ag::add_bias(ag::matmul(h, g.parameter(p.w3)), g.parameter(p.b3)));
}

}  // namespace vad::mil
