// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vad/autograd/graph.hpp"
#include "vad/mil/classifier.hpp"
#include "vad/mil/conv_module.hpp"
#include "vad/rng.hpp"
#include "vad/tsa/attention.hpp"
#include "vad/tsa/scorer.hpp"

namespace vad::mil {

struct ModelShape {
  std::size_t d = 512;
  std::size_t scorer_hidden1 = 512;
  std::size_t scorer_hidden2 = 256;
  std::size_t classifier_hidden1 = 128;
  std::size_t classifier_hidden2 = 32;
};

/// Every trainable tensor: scorer, context module and classifier.
struct ModelParams {
  ModelShape shape;
  tsa::ScorerParams scorer;
  ConvModuleParams conv;
  ClassifierParams classifier;

  /// Each sub-network draws from its own seeded stream.
  static ModelParams init(const ModelShape& shape, std::uint64_t seed);
  std::vector<ag::Parameter*> parameters();
  void zero_grad();
};

struct ForwardConfig {
  bool tsa_enabled = true;
  tsa::TsaConfig tsa;
  float dropout = 0.7f;
};

struct BagOutputs {
  std::vector<ag::Var> attention;  // TSA output, or the input when TSA is off
  std::vector<ag::Var> context;    // output of the context module
  std::vector<ag::Var> scores;     // [T x 1] classifier scores
  std::vector<tsa::SoftSelection> selections;
};

/// Runs TSA -> context module -> classifier on each [T x d] bag.
BagOutputs forward_bags(std::span<const ag::Var> bags, ModelParams& model, const ForwardConfig& cfg, Rng& noise_rng,
                        Rng& dropout_rng);

}  // namespace vad::mil
