// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/autograd/kernels.hpp"

#include <algorithm>
#include <vector>

namespace vad::ag::kernels {
namespace {

void store(std::span<float> c, const std::vector<double>& acc, std::size_t offset, bool accumulate) {
  for (std::size_t j = 0; j < acc.size(); ++j) {
    const auto v = static_cast<float>(acc[j]);
    c[offset + j] = accumulate ? c[offset + j] + v : v;
  }
}

}  // namespace

void gemm_nn(std::span<const float> a, std::span<const float> b, std::span<float> c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate) {
  std::vector<double> acc(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const float* arow = a.data() + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const float* brow = b.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) acc[j] += av * brow[j];
    }
    store(c, acc, i * n, accumulate);
  }
}

void gemm_nt(std::span<const float> a, std::span<const float> b, std::span<float> c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const float* arow = a.data() + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const float* brow = b.data() + j * k;
      double dot = 0.0;
      for (std::size_t p = 0; p < k; ++p) dot += static_cast<double>(arow[p]) * brow[p];
      const auto v = static_cast<float>(dot);
      c[i * n + j] = accumulate ? c[i * n + j] + v : v;
    }
  }
}

void gemm_tn(std::span<const float> a, std::span<const float> b, std::span<float> c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate) {
  std::vector<double> acc(k * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const float* arow = a.data() + i * k;
    const float* brow = b.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      double* crow = acc.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  for (std::size_t p = 0; p < k * n; ++p) {
    const auto v = static_cast<float>(acc[p]);
    c[p] = accumulate ? c[p] + v : v;
  }
}

}  // namespace vad::ag::kernels
