// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "vad/features/manifest.hpp"
#include "vad/mil/batch.hpp"
#include "vad/mil/magnitude.hpp"
#include "vad/mil/model.hpp"
#include "vad/tsa/attention.hpp"

namespace vad::mil {

struct TrainConfig {
  std::size_t length = 32;  // T, snippets per bag after normalization
  std::size_t half_batch = 8;
  // One epoch is one optimizer step on a freshly sampled batch.
  std::size_t epochs = 200;
  double lr = 1e-3;
  double weight_decay = 5e-3;
  DmtConfig dmt;
  tsa::TsaConfig tsa;
  bool tsa_enabled = true;
  float dropout = 0.7f;
  ModelShape model;
  std::uint64_t seed = 0;
  std::size_t validate_every = 0;  // 0 disables validation

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

struct EpochLog {
  std::size_t epoch = 0;
  double loss = 0.0;
  double margin = 0.0;
  double bce = 0.0;
  std::optional<double> val_auc;
};

struct TrainResult {
  ModelParams model;
  std::vector<EpochLog> log;
};

/// Called every `validate_every` epochs with the current model; returns AUC.
using Validator = std::function<double(ModelParams&)>;

/// batch -> TSA (if enabled) -> context module -> classifier -> DMT loss ->
/// backward -> Adam, once per epoch. Throws NumericError if the loss goes
/// non-finite.
TrainResult train(const features::Dataset& train_set, const TrainConfig& cfg, const Validator& validator = {});

/// Loss of a single training step without updating anything. Exposed for tests.
DmtLoss batch_loss(ag::Graph& graph, const BatchLayout& batch, ModelParams& model, const TrainConfig& cfg,
                   Rng& noise_rng, Rng& dropout_rng);

/// CSV: epoch,loss,margin,bce,val_auc (val_auc empty when not computed).
void write_training_log(std::ostream& out, const std::vector<EpochLog>& log);

}  // namespace vad::mil
