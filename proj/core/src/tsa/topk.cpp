// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/tsa/topk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vad/error.hpp"

namespace vad::tsa {

std::size_t kappa_from_ratio(std::size_t length, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw InvalidArgument("selection ratio must lie in (0, 1]");
  if (length == 0) throw InvalidArgument("snippet count must be positive");
  const auto kappa = static_cast<std::size_t>(std::floor(static_cast<double>(length) * ratio));
  return std::max<std::size_t>(kappa, 1);
}

ag::Tensor SoftSelection::matrix() const {
  ag::Tensor out({kappa, length});
  for (std::size_t k = 0; k < kappa; ++k)
    for (std::size_t i = 0; i < length; ++i) out.at(k, i) = static_cast<float>(weight(k, i));
  return out;
}

std::vector<double> SoftSelection::inclusion() const {
  std::vector<double> out(length, 0.0);
  for (std::size_t i = 0; i < length; ++i) {
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < kappa; ++k) total += counts[k * length + i];
    out[i] = static_cast<double>(total) / static_cast<double>(samples);
  }
  return out;
}

std::vector<std::size_t> hard_topk(std::span<const double> scores, std::size_t kappa) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kappa), order.end(),
                    [&](std::size_t a, std::size_t b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); });
  order.resize(kappa);
  return order;
}

TopKResult topk_score(std::size_t samples, std::size_t kappa, std::span<const float> scores, double sigma, Rng& rng) {
  const std::size_t length = scores.size();
  if (samples < 1) throw InvalidArgument("topk_score: sample count must be >= 1");
  if (kappa < 1 || kappa > length) {
    throw InvalidArgument("topk_score: kappa " + std::to_string(kappa) + " outside [1, " + std::to_string(length) + "]");
  }
  if (!(sigma >= 0.0)) throw InvalidArgument("topk_score: noise scale must be non-negative");

  TopKResult out;
  SoftSelection& sel = out.selection;
  sel.kappa = kappa;
  sel.length = length;
  sel.samples = samples;
  sel.counts.assign(kappa * length, 0);

  PerturbationDraws& draws = out.draws;
  draws.samples = samples;
  draws.length = length;
  draws.sigma = sigma;
  draws.included.assign(samples * length, 0);

  std::vector<double> perturbed(length);
  if (sigma == 0.0) {
    for (std::size_t i = 0; i < length; ++i) perturbed[i] = scores[i];
    const std::vector<std::size_t> top = hard_topk(perturbed, kappa);
    for (std::size_t k = 0; k < kappa; ++k) sel.counts[k * length + top[k]] = static_cast<std::uint32_t>(samples);
    for (std::size_t m = 0; m < samples; ++m)
      for (std::size_t i : top) draws.included[m * length + i] = 1;
    return out;
  }

  draws.noise.resize(samples * length);
  for (std::size_t m = 0; m < samples; ++m) {
    double* z = &draws.noise[m * length];
    for (std::size_t i = 0; i < length; ++i) {
      z[i] = rng.normal();
      perturbed[i] = static_cast<double>(scores[i]) + sigma * z[i];
    }
    const std::vector<std::size_t> top = hard_topk(perturbed, kappa);
    for (std::size_t k = 0; k < kappa; ++k) {
      ++sel.counts[k * length + top[k]];
      draws.included[m * length + top[k]] = 1;
    }
  }
  return out;
}

namespace {

std::vector<double> mean_inclusion(const PerturbationDraws& draws) {
  std::vector<double> mean(draws.length, 0.0);
  for (std::size_t m = 0; m < draws.samples; ++m)
    for (std::size_t i = 0; i < draws.length; ++i) mean[i] += draws.included[m * draws.length + i];
  for (double& v : mean) v /= static_cast<double>(draws.samples);
  return mean;
}

bool degenerate(const PerturbationDraws& draws) {
  if (draws.empty()) throw InvalidArgument("selection gradient requested without saved forward draws");
  return draws.sigma == 0.0 || draws.samples < 2;
}

}  // namespace

std::vector<double> selection_jacobian(const PerturbationDraws& draws) {
  const std::size_t n = draws.length;
  std::vector<double> jac(n * n, 0.0);
  if (degenerate(draws)) return jac;
  const std::vector<double> mean = mean_inclusion(draws);
  for (std::size_t m = 0; m < draws.samples; ++m) {
    const double* z = &draws.noise[m * n];
    const std::uint8_t* v = &draws.included[m * n];
    for (std::size_t i = 0; i < n; ++i) {
      const double centered = v[i] - mean[i];
      if (centered == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) jac[i * n + j] += centered * z[j];
    }
  }
  const double norm = 1.0 / (static_cast<double>(draws.samples - 1) * draws.sigma);
  for (double& v : jac) v *= norm;
  return jac;
}

std::vector<double> selection_vjp(const PerturbationDraws& draws, std::span<const double> upstream) {
  const std::size_t n = draws.length;
  if (upstream.size() != n) throw ShapeError("selection_vjp: upstream gradient length mismatch");
  std::vector<double> grad(n, 0.0);
  if (degenerate(draws)) return grad;
  const std::vector<double> mean = mean_inclusion(draws);
  for (std::size_t m = 0; m < draws.samples; ++m) {
    const std::uint8_t* v = &draws.included[m * n];
    double projected = 0.0;
    for (std::size_t i = 0; i < n; ++i) projected += upstream[i] * (v[i] - mean[i]);
    if (projected == 0.0) continue;
    const double* z = &draws.noise[m * n];
    for (std::size_t j = 0; j < n; ++j) grad[j] += projected * z[j];
  }
  const double norm = 1.0 / (static_cast<double>(draws.samples - 1) * draws.sigma);
  for (double& g : grad) g *= norm;
  return grad;
}

}  // namespace vad::tsa
