// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/mil/batch.hpp"

#include <algorithm>
#include <numeric>

#include "vad/error.hpp"
#include "vad/features/normalize.hpp"

namespace vad::mil {

ag::Tensor BatchLayout::bag(std::size_t i) const {
  const std::size_t stride = length * dim;
  std::vector<float> data(bags.data().begin() + static_cast<std::ptrdiff_t>(i * stride),
                          bags.data().begin() + static_cast<std::ptrdiff_t>((i + 1) * stride));
  return ag::Tensor({length, dim}, std::move(data));
}

namespace {

std::vector<std::size_t> draw(const std::vector<std::size_t>& pool, std::size_t count, Rng& rng) {
  std::vector<std::size_t> out;
  out.reserve(count);
  if (pool.size() >= count) {
    std::vector<std::size_t> shuffled = pool;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.index(shuffled.size() - i);
      std::swap(shuffled[i], shuffled[j]);
      out.push_back(shuffled[i]);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) out.push_back(pool[rng.index(pool.size())]);
  }
  return out;
}

}  // namespace

BatchLayout build_batch(const features::Dataset& train, std::size_t half, std::size_t length, Rng& rng) {
  if (half < 1) throw InvalidArgument("build_batch: B must be >= 1");
  if (length < 1) throw InvalidArgument("build_batch: T must be >= 1");
  std::vector<std::size_t> normal, abnormal;
  for (std::size_t i = 0; i < train.records.size(); ++i) (train.records[i].label == 1 ? abnormal : normal).push_back(i);
  if (normal.empty() || abnormal.empty()) {
    throw InvalidArgument("build_batch: the training set needs both normal and abnormal videos");
  }

  BatchLayout batch;
  batch.half = half;
  batch.length = length;
  batch.dim = train.manifest.d;
  batch.bags = ag::Tensor({2 * half, length, batch.dim});

  std::vector<std::size_t> picks = draw(normal, half, rng);
  const std::vector<std::size_t> abnormal_picks = draw(abnormal, half, rng);
  picks.insert(picks.end(), abnormal_picks.begin(), abnormal_picks.end());

  const std::size_t stride = length * batch.dim;
  for (std::size_t b = 0; b < picks.size(); ++b) {
    const features::VideoRecord& rec = train.records[picks[b]];
    const ag::Tensor normalized = features::temporal_normalize(rec.features, length);
    std::copy(normalized.data().begin(), normalized.data().end(),
              batch.bags.data().begin() + static_cast<std::ptrdiff_t>(b * stride));
    batch.labels.push_back(b < half ? 0 : 1);
    batch.ids.push_back(rec.id);
  }
  return batch;
}

}  // namespace vad::mil
