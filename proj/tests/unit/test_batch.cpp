// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>

#include "vad/error.hpp"
#include "vad/features/normalize.hpp"
#include "vad/features/synthetic.hpp"
#include "vad/mil/batch.hpp"
#include "vad/rng.hpp"

namespace {

using namespace vad::features;
using vad::mil::build_batch;

Dataset train_split(std::size_t normal, std::size_t abnormal, std::uint64_t seed = 1) {
  SyntheticConfig c = default_synthetic_config(seed);
  c.n_normal = normal;
  c.n_abnormal = abnormal;
  c.d = 4;
  const auto data = generate_synthetic(c);
  return {data.train.manifest, data.train.records};
}

TEST(Batch, LayoutIsNormalThenAbnormal) {
  const Dataset ds = train_split(12, 9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    vad::Rng rng(seed);
    const auto b = build_batch(ds, 4, 8, rng);
    ASSERT_EQ(b.size(), 8u);
    EXPECT_EQ(b.bags.shape(), (vad::ag::Shape{8, 8, 4}));
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(b.labels[i], i < 4 ? 0 : 1);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NE(b.ids[i].find(i < 4 ? "_normal" : "_abnormal"), std::string::npos);
  }
}

TEST(Batch, BagsAreNormalizedVideos) {
  const Dataset ds = train_split(3, 3);
  vad::Rng rng(2);
  const auto b = build_batch(ds, 2, 5, rng);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto it = std::find_if(ds.records.begin(), ds.records.end(), [&](const auto& r) { return r.id == b.ids[i]; });
    ASSERT_NE(it, ds.records.end());
    EXPECT_EQ(b.bag(i), temporal_normalize(it->features, 5));
  }
}

TEST(Batch, NoRepeatsWhenThePoolIsLargeEnough) {
  const Dataset ds = train_split(6, 6);
  vad::Rng rng(3);
  const auto b = build_batch(ds, 6, 4, rng);
  EXPECT_EQ(std::set<std::string>(b.ids.begin(), b.ids.end()).size(), 12u);
}

TEST(Batch, SingleVideoPerClassIsDeterministic) {
  const Dataset ds = train_split(1, 1);
  vad::Rng a(1), b(99);
  const auto x = build_batch(ds, 1, 6, a);
  const auto y = build_batch(ds, 1, 6, b);
  EXPECT_EQ(x.bags, y.bags);
  EXPECT_EQ(x.ids, y.ids);
}

TEST(Batch, ReplayedSeedGivesIdenticalDraws) {
  const Dataset ds = train_split(20, 20);
  vad::Rng a(7), b(7);
  for (int i = 0; i < 500; ++i) {
    const auto x = build_batch(ds, 2, 4, a);
    const auto y = build_batch(ds, 2, 4, b);
    ASSERT_EQ(x.ids, y.ids);
  }
}

TEST(Batch, SmallPoolsSampleWithReplacement) {
  const Dataset ds = train_split(2, 2);
  vad::Rng rng(4);
  const auto b = build_batch(ds, 5, 4, rng);
  EXPECT_EQ(b.size(), 10u);
}

TEST(Batch, InvalidRequestsRejected) {
  const Dataset ds = train_split(2, 2);
  vad::Rng rng(5);
  EXPECT_THROW(build_batch(ds, 0, 4, rng), vad::InvalidArgument);
  EXPECT_THROW(build_batch(ds, 1, 0, rng), vad::InvalidArgument);
  Dataset only_normal = ds;
  std::erase_if(only_normal.records, [](const auto& r) { return r.label == 1; });
  EXPECT_THROW(build_batch(only_normal, 1, 4, rng), vad::InvalidArgument);
}

}  // namespace
