// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/mil/model.hpp"

namespace vad::mil {

ModelParams ModelParams::init(const ModelShape& shape, std::uint64_t seed) {
  Rng scorer_rng(seed, Stream::kInitScorer);
  Rng conv_rng(seed, Stream::kInitConv);
  Rng classifier_rng(seed, Stream::kInitClassifier);
  ModelParams m;
  m.shape = shape;
  m.scorer = tsa::ScorerParams::init(shape.d, shape.scorer_hidden1, shape.scorer_hidden2, scorer_rng);
  m.conv = ConvModuleParams::init(shape.d, conv_rng);
  m.classifier = ClassifierParams::init(shape.d, shape.classifier_hidden1, shape.classifier_hidden2, classifier_rng);
  return m;
}

std::vector<ag::Parameter*> ModelParams::parameters() {
  std::vector<ag::Parameter*> out = scorer.parameters();
  for (ag::Parameter* p : conv.parameters()) out.push_back(p);
  for (ag::Parameter* p : classifier.parameters()) out.push_back(p);
  return out;
}

void ModelParams::zero_grad() {
  for (ag::Parameter* p : parameters()) p->zero_grad();
}

BagOutputs forward_bags(std::span<const ag::Var> bags, ModelParams& model, const ForwardConfig& cfg, Rng& noise_rng,
                        Rng& dropout_rng) {
  BagOutputs out;
  for (const ag::Var& bag : bags) {
    if (cfg.tsa_enabled) {
      tsa::TsaOutput t = tsa::tsa_forward(bag, model.scorer, cfg.tsa, noise_rng);
      out.attention.push_back(t.attention);
      out.selections.push_back(std::move(t.selection));
    } else {
      out.attention.push_back(bag);
    }
    out.context.push_back(conv_module_forward(out.attention.back(), model.conv));
    out.scores.push_back(classify(out.context.back(), model.classifier, cfg.dropout, dropout_rng));
  }
  return out;
}

}  // namespace vad::mil
