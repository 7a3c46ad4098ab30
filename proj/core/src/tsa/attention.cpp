// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/tsa/attention.hpp"

#include <vector>

#include "vad/autograd/ops.hpp"
#include "vad/error.hpp"

namespace vad::tsa {

void TsaConfig::validate() const {
  if (samples < 1) throw InvalidArgument("TSA sample count must be >= 1");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw InvalidArgument("TSA ratio must lie in (0, 1]");
  if (!(sigma >= 0.0)) throw InvalidArgument("TSA noise scale must be non-negative");
}

ag::Var perturbed_selection(const ag::Var& scores, std::size_t kappa, const TsaConfig& cfg, Rng& rng,
                            SoftSelection* selection_out) {
  const ag::Tensor& sv = scores.value();
  const std::size_t length = sv.size();
  TopKResult result = topk_score(cfg.samples, kappa, sv.data(), cfg.sigma, rng);

  const std::vector<double> inclusion = result.selection.inclusion();
  ag::Tensor weights({length, 1});
  for (std::size_t i = 0; i < length; ++i) weights[i] = static_cast<float>(inclusion[i]);
  if (selection_out != nullptr) *selection_out = result.selection;

  std::vector<std::uint8_t> hard_mask;
  if (cfg.gradient == SelectionGradient::kStraightThrough) {
    std::vector<double> raw(sv.data().begin(), sv.data().end());
    hard_mask.assign(length, 0);
    for (std::size_t i : hard_topk(raw, kappa)) hard_mask[i] = 1;
  }

  return scores.graph().record(
      "perturbed_topk", std::move(weights), {scores},
      [draws = std::move(result.draws), hard_mask = std::move(hard_mask), mode = cfg.gradient,
       length](const ag::Tensor& g, std::span<ag::Tensor* const> grads) {
        ag::Tensor& gs = *grads[0];
        if (mode == SelectionGradient::kStraightThrough) {
          for (std::size_t i = 0; i < length; ++i)
            if (hard_mask[i] != 0) gs[i] += g[i];
          return;
        }
        std::vector<double> upstream(g.data().begin(), g.data().end());
        const std::vector<double> grad = selection_vjp(draws, upstream);
        for (std::size_t i = 0; i < length; ++i) gs[i] += static_cast<float>(grad[i]);
      });
}

TsaOutput tsa_forward(const ag::Var& features, ScorerParams& scorer, const TsaConfig& cfg, Rng& rng) {
  cfg.validate();
  const ag::Tensor& fv = features.value();
  if (fv.rank() != 2 || fv.dim(0) == 0) throw ShapeError("tsa_forward: expected a non-empty [T x d] feature matrix");
  if (fv.dim(1) != scorer.input_dim()) {
    throw ShapeError("tsa_forward: feature width " + std::to_string(fv.dim(1)) + " does not match scorer input " +
                     std::to_string(scorer.input_dim()));
  }
  TsaOutput out;
  out.scores = score_snippets(features, scorer);
  const std::size_t kappa = kappa_from_ratio(fv.dim(0), cfg.ratio);
  out.weights = perturbed_selection(out.scores, kappa, cfg, rng, &out.selection);
  out.attention = ag::scale_rows(features, out.weights);
  return out;
}

ag::Tensor fuse(const SoftSelection& selection, const ag::Tensor& features) {
  if (features.dim(0) != selection.length) throw ShapeError("fuse: selection length does not match features");
  const std::vector<double> inclusion = selection.inclusion();
  ag::Tensor out = features;
  const std::size_t d = features.dim(1);
  for (std::size_t i = 0; i < selection.length; ++i)
    for (std::size_t j = 0; j < d; ++j) out.at(i, j) = static_cast<float>(inclusion[i] * features.at(i, j));
  return out;
}

ag::Tensor fuse_by_cloning(const SoftSelection& selection, const ag::Tensor& features) {
  const std::size_t kappa = selection.kappa, length = selection.length, d = features.dim(1);
  if (features.dim(0) != length) throw ShapeError("fuse_by_cloning: selection length does not match features");
  // cloned_selection[k][i][j] = V[k][i], cloned_features[k][i][j] = F[i][j]
  std::vector<double> cloned_selection(kappa * length * d), cloned_features(kappa * length * d);
  for (std::size_t k = 0; k < kappa; ++k)
    for (std::size_t i = 0; i < length; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        cloned_selection[(k * length + i) * d + j] = selection.weight(k, i);
        cloned_features[(k * length + i) * d + j] = features.at(i, j);
      }
  std::vector<double> product(kappa * length * d);
  for (std::size_t e = 0; e < product.size(); ++e) product[e] = cloned_selection[e] * cloned_features[e];
  ag::Tensor out({length, d});
  for (std::size_t i = 0; i < length; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double total = 0.0;
      for (std::size_t k = 0; k < kappa; ++k) total += product[(k * length + i) * d + j];
      out.at(i, j) = static_cast<float>(total);
    }
  return out;
}

}  // namespace vad::tsa
