// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "vad/error.hpp"

namespace vad::eval {

namespace {

struct Group {
  double positives = 0.0;
  double negatives = 0.0;
};

// Label counts per distinct score, highest score first.
std::vector<Group> threshold_groups(std::span<const float> scores, std::span<const std::uint8_t> labels,
                                    const char* who) {
  if (scores.size() != labels.size()) throw ShapeError(std::string(who) + ": scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (float s : scores)
    if (std::isnan(s)) throw NumericError(std::string(who) + ": NaN score");
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<Group> groups;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || scores[order[k]] != scores[order[k - 1]]) groups.emplace_back();
    (labels[order[k]] ? groups.back().positives : groups.back().negatives) += 1.0;
  }
  return groups;
}

}  // namespace

double auc_roc(std::span<const float> scores, std::span<const std::uint8_t> labels) {
  const std::vector<Group> groups = threshold_groups(scores, labels, "auc_roc");
  double pos = 0.0;
  double neg = 0.0;
  for (const Group& g : groups) {
    pos += g.positives;
    neg += g.negatives;
  }
  if (pos == 0.0 || neg == 0.0) throw InvalidArgument("auc_roc: need at least one positive and one negative label");
  // Trapezoid between consecutive (fp, tp) points; counts stay integral so
  // the only rounding is the final division.
  double tp = 0.0;
  double area = 0.0;
  for (const Group& g : groups) {
    area += g.negatives * (tp + 0.5 * g.positives);
    tp += g.positives;
  }
  return area / (pos * neg);
}

double auc_pr(std::span<const float> scores, std::span<const std::uint8_t> labels) {
  const std::vector<Group> groups = threshold_groups(scores, labels, "auc_pr");
  double pos = 0.0;
  for (const Group& g : groups) pos += g.positives;
  if (pos == 0.0) throw InvalidArgument("auc_pr: need at least one positive label");
  double tp = 0.0;
  double fp = 0.0;
  double ap = 0.0;
  for (const Group& g : groups) {
    tp += g.positives;
    fp += g.negatives;
    if (g.positives > 0.0) ap += (g.positives / pos) * (tp / (tp + fp));
  }
  return ap;
}

}  // namespace vad::eval
