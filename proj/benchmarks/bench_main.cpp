// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "vad/autograd/graph.hpp"
#include "vad/autograd/ops.hpp"
#include "vad/eval/metrics.hpp"
#include "vad/rng.hpp"
#include "vad/tsa/attention.hpp"
#include "vad/tsa/scorer.hpp"
#include "vad/tsa/topk.hpp"

namespace {

vad::ag::Tensor random_tensor(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  vad::Rng rng(seed);
  vad::ag::Tensor t({rows, cols});
  for (auto& v : t.storage()) v = static_cast<float>(rng.normal());
  return t;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_tensor(n, n, 1), b = random_tensor(n, n, 2);
  for (auto _ : state) {
    vad::ag::Graph g(false);
    benchmark::DoNotOptimize(vad::ag::matmul(g.constant(a), g.constant(b)).value().data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(128)->Arg(256);

void BM_TopkScore(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  vad::Rng rng(3);
  std::vector<float> w(len);
  for (auto& v : w) v = static_cast<float>(rng.uniform());
  const std::size_t kappa = vad::tsa::kappa_from_ratio(len, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(vad::tsa::topk_score(100, kappa, w, 0.05, rng));
}
BENCHMARK(BM_TopkScore)->Arg(16)->Arg(32)->Arg(128);

void BM_TsaForward(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  vad::Rng rng(4);
  auto scorer = vad::tsa::ScorerParams::init(d, 512, 256, rng);
  const auto x = random_tensor(32, d, 5);
  const vad::tsa::TsaConfig cfg;
  for (auto _ : state) {
    vad::ag::Graph g(false);
    benchmark::DoNotOptimize(vad::tsa::tsa_forward(g.constant(x), scorer, cfg, rng).attention.value().data().data());
  }
}
BENCHMARK(BM_TsaForward)->Arg(32)->Arg(512);

void BM_AucRoc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  vad::Rng rng(6);
  std::vector<float> s(n);
  std::vector<std::uint8_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = static_cast<float>(rng.uniform());
    y[i] = rng.uniform() < 0.2 ? 1 : 0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(vad::eval::auc_roc(s, y));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_AucRoc)->Arg(10000)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
