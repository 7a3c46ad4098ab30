// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vad/autograd/graph.hpp"
#include "vad/rng.hpp"

// Differentiable operations recorded on a Graph. Matrices are 2-D row-major;
// scalars are shape [1]. Float storage, double accumulation in reductions.
namespace vad::ag {

Var matmul(const Var& a, const Var& b);
Var transpose(const Var& a);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
/// x[m x n] + bias broadcast over rows; bias has n elements.
Var add_bias(const Var& x, const Var& bias);
Var scale(const Var& x, float factor);
Var add_scalar(const Var& x, float offset);

Var relu(const Var& x);
Var sigmoid(const Var& x);

/// Inverted dropout with drop probability `p`. Identity when the graph is in
/// eval mode or p == 0.
Var dropout(const Var& x, float p, Rng& rng);

Var sum(const Var& x);
Var mean(const Var& x);
/// Euclidean norm over all elements. The subgradient at 0 is taken as 0.
Var l2_norm(const Var& x);

/// Temporal cross-correlation. x is [T x c_in], w is [k x c_in x c_out] with
/// odd k; zero padding of (k - 1) * dilation / 2 keeps the output length T.
Var conv1d_dilated(const Var& x, const Var& w, std::size_t dilation);

Var concat_cols(std::span<const Var> parts);
Var concat_rows(std::span<const Var> parts);
Var slice_rows(const Var& x, std::size_t begin, std::size_t count);
/// Gathers rows by index; the gradient scatters back to those rows only.
Var select_rows(const Var& x, std::span<const std::size_t> indices);
/// Column means of a [T x d] matrix, as [1 x d].
Var mean_rows(const Var& x);
/// out_i = w_i * x_i for x [T x d] and a T-element weight vector w.
Var scale_rows(const Var& x, const Var& w);
Var softmax_rows(const Var& x);

/// Mean binary cross-entropy of probabilities p against `targets`.
/// Probabilities are clamped to [eps, 1 - eps].
Var binary_cross_entropy(const Var& p, std::span<const float> targets, float eps = 1e-7f);

}  // namespace vad::ag
