// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/mil/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "vad/autograd/adam.hpp"
#include "vad/error.hpp"
#include "vad/mil/batch.hpp"
#include "vad/mil/checkpoint.hpp"

namespace vad::mil {

void TrainConfig::validate() const {
  if (length < 1) throw InvalidArgument("train: T must be >= 1");
  if (half_batch < 1) throw InvalidArgument("train: B must be >= 1");
  if (dmt.alpha < 1 || dmt.alpha > length) throw InvalidArgument("train: alpha must lie in [1, T]");
  if (!(dropout >= 0.0f && dropout < 1.0f)) throw InvalidArgument("train: dropout must lie in [0, 1)");
  if (!(lr >= 0.0) || !(weight_decay >= 0.0)) throw InvalidArgument("train: lr and weight decay must be >= 0");
  tsa.validate();
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"T", c.length},
          {"B", c.half_batch},
          {"epochs", c.epochs},
          {"lr", c.lr},
          {"weight_decay", c.weight_decay},
          {"alpha", c.dmt.alpha},
          {"margin", c.dmt.margin},
          {"margin_weight", c.dmt.margin_weight},
          {"bce_weight", c.dmt.bce_weight},
          {"video_score", c.dmt.video_score == VideoScore::kTopScore ? "top_score" : "top_magnitude"},
          {"samples", c.tsa.samples},
          {"r", c.tsa.ratio},
          {"sigma_noise", c.tsa.sigma},
          {"straight_through", c.tsa.gradient == tsa::SelectionGradient::kStraightThrough},
          {"tsa_enabled", c.tsa_enabled},
          {"dropout", c.dropout},
          {"model", to_json(c.model)},
          {"seed", c.seed},
          {"validate_every", c.validate_every}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.length = j.at("T").get<std::size_t>();
  c.half_batch = j.at("B").get<std::size_t>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.lr = j.at("lr").get<double>();
  c.weight_decay = j.at("weight_decay").get<double>();
  c.dmt.alpha = j.at("alpha").get<std::size_t>();
  c.dmt.margin = j.at("margin").get<double>();
  c.dmt.margin_weight = j.at("margin_weight").get<double>();
  c.dmt.bce_weight = j.at("bce_weight").get<double>();
  const auto video_score = j.value("video_score", std::string("top_magnitude"));
  if (video_score == "top_score") {
    c.dmt.video_score = VideoScore::kTopScore;
  } else if (video_score != "top_magnitude") {
    throw FormatError("train config: unknown video_score '" + video_score + "'");
  }
  c.tsa.samples = j.at("samples").get<std::size_t>();
  c.tsa.ratio = j.at("r").get<double>();
  c.tsa.sigma = j.at("sigma_noise").get<double>();
  c.tsa.gradient = j.at("straight_through").get<bool>() ? tsa::SelectionGradient::kStraightThrough
                                                         : tsa::SelectionGradient::kPerturbed;
  c.tsa_enabled = j.at("tsa_enabled").get<bool>();
  c.dropout = j.at("dropout").get<float>();
  c.model = model_shape_from_json(j.at("model"));
  c.seed = j.at("seed").get<std::uint64_t>();
  c.validate_every = j.at("validate_every").get<std::size_t>();
  return c;
}

DmtLoss batch_loss(ag::Graph& graph, const BatchLayout& batch, ModelParams& model, const TrainConfig& cfg,
                   Rng& noise_rng, Rng& dropout_rng) {
  std::vector<ag::Var> bags;
  bags.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) bags.push_back(graph.constant(batch.bag(i)));
  const ForwardConfig fwd{cfg.tsa_enabled, cfg.tsa, cfg.dropout};
  const BagOutputs out = forward_bags(bags, model, fwd, noise_rng, dropout_rng);
  return dmt_loss(out.context, out.scores, batch.labels, cfg.dmt);
}

TrainResult train(const features::Dataset& train_set, const TrainConfig& cfg, const Validator& validator) {
  cfg.validate();
  if (train_set.manifest.d != cfg.model.d) {
    throw InvalidArgument("train: dataset d = " + std::to_string(train_set.manifest.d) + " but model d = " +
                          std::to_string(cfg.model.d));
  }
  TrainResult result;
  result.model = ModelParams::init(cfg.model, cfg.seed);
  std::vector<ag::Parameter*> params = result.model.parameters();
  ag::AdamState adam = ag::AdamState::for_parameters(params, {cfg.lr, 0.9, 0.999, 1e-8, cfg.weight_decay});

  Rng batch_rng(cfg.seed, Stream::kBatch);
  Rng dropout_rng(cfg.seed, Stream::kDropout);
  Rng noise_rng(cfg.seed, Stream::kSelectionNoise);

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const BatchLayout batch = build_batch(train_set, cfg.half_batch, cfg.length, batch_rng);
    ag::Graph graph(true);
    result.model.zero_grad();
    const DmtLoss loss = batch_loss(graph, batch, result.model, cfg, noise_rng, dropout_rng);
    const double value = loss.total.value().item();
    if (!std::isfinite(value)) throw NumericError("train: loss diverged at epoch " + std::to_string(epoch));
    graph.backward(loss.total);
    ag::adam_step(params, adam);

    EpochLog entry{epoch, value, loss.margin.value().item(), loss.bce.value().item(), std::nullopt};
    if (validator && cfg.validate_every > 0 && epoch % cfg.validate_every == 0) entry.val_auc = validator(result.model);
    result.log.push_back(entry);
  }
  result.model.zero_grad();
  return result;
}

void write_training_log(std::ostream& out, const std::vector<EpochLog>& log) {
  out << "epoch,loss,margin,bce,val_auc\n";
  char line[160];
  for (const EpochLog& e : log) {
    std::snprintf(line, sizeof(line), "%zu,%.9g,%.9g,%.9g,", e.epoch, e.loss, e.margin, e.bce);
    out << line;
    if (e.val_auc) {
      std::snprintf(line, sizeof(line), "%.9g", *e.val_auc);
      out << line;
    }
    out << '\n';
  }
}

}  // namespace vad::mil
