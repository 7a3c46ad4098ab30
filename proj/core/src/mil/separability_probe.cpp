// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/mil/separability_probe.hpp"

#include <cmath>

#include "vad/error.hpp"
#include "vad/mil/magnitude.hpp"
#include "vad/rng.hpp"

namespace vad::mil {

namespace {

ProbePoint summarize(std::size_t alpha, const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double se = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {alpha, mean, se};
}

}  // namespace

ProbePoint ProbeResult::difference(std::size_t a, std::size_t b) const {
  std::vector<double> diff(samples.at(a).size());
  for (std::size_t t = 0; t < diff.size(); ++t) diff[t] = samples[b][t] - samples[a][t];
  return summarize(0, diff);
}

ProbeResult probe_separability(const ProbeConfig& cfg, std::span<const std::size_t> alphas, std::size_t trials) {
  if (trials < 1) throw InvalidArgument("probe_separability: need at least one trial");
  if (cfg.epsilon < 1 || cfg.epsilon > cfg.length) throw InvalidArgument("probe_separability: epsilon must lie in [1, T]");
  for (std::size_t a : alphas)
    if (a < 1 || a > cfg.length) throw InvalidArgument("probe_separability: alpha must lie in [1, T]");

  const std::size_t d = cfg.generator.d;
  const features::SnippetSampler sampler(cfg.generator);
  Rng rng(cfg.seed, Stream::kProbe);

  ProbeResult out;
  out.samples.assign(alphas.size(), std::vector<double>(trials));
  ag::Tensor normal({cfg.length, d});
  ag::Tensor abnormal({cfg.length, d});
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t start = rng.index(cfg.length - cfg.epsilon + 1);
    for (std::size_t i = 0; i < cfg.length; ++i) {
      sampler.normal(rng, normal.data().subspan(i * d, d));
      const std::span<float> row = abnormal.data().subspan(i * d, d);
      if (i >= start && i < start + cfg.epsilon) {
        sampler.abnormal(rng, row);
      } else {
        sampler.normal(rng, row);
      }
    }
    for (std::size_t k = 0; k < alphas.size(); ++k) out.samples[k][t] = separability(abnormal, normal, alphas[k]);
  }
  for (std::size_t k = 0; k < alphas.size(); ++k) out.points.push_back(summarize(alphas[k], out.samples[k]));
  return out;
}

}  // namespace vad::mil
