// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

// Dense float kernels with double accumulators. When `accumulate` is set the
// result is added into `c` instead of overwriting it.
namespace vad::ag::kernels {

// c[m x n] = a[m x k] * b[k x n]
void gemm_nn(std::span<const float> a, std::span<const float> b, std::span<float> c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate);

// c[m x n] = a[m x k] * b[n x k]^T
void gemm_nt(std::span<const float> a, std::span<const float> b, std::span<float> c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate);

// c[k x n] = a[m x k]^T * b[m x n]
void gemm_tn(std::span<const float> a, std::span<const float> b, std::span<float> c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate);

}  // namespace vad::ag::kernels
