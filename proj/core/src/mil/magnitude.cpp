// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/mil/magnitude.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vad/autograd/ops.hpp"
#include "vad/error.hpp"

namespace vad::mil {
namespace {

void check_alpha(std::size_t alpha, std::size_t length) {
  if (alpha < 1 || alpha > length) {
    throw InvalidArgument("alpha " + std::to_string(alpha) + " outside [1, " + std::to_string(length) + "]");
  }
}

std::vector<std::size_t> top_by(std::span<const double> keys, std::size_t count) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&](std::size_t a, std::size_t b) { return keys[a] > keys[b] || (keys[a] == keys[b] && a < b); });
  order.resize(count);
  return order;
}

double norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

std::vector<std::size_t> top_alpha_rows(const ag::Tensor& features, std::size_t alpha) {
  if (features.rank() != 2) throw ShapeError("top_alpha_rows: expected a [T x d] matrix");
  const std::size_t length = features.dim(0), d = features.dim(1);
  check_alpha(alpha, length);
  std::vector<double> magnitudes(length);
  for (std::size_t i = 0; i < length; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += static_cast<double>(features.at(i, j)) * features.at(i, j);
    magnitudes[i] = std::sqrt(acc);
  }
  return top_by(magnitudes, alpha);
}

std::vector<double> top_alpha_mean(const ag::Tensor& features, std::size_t alpha) {
  const std::vector<std::size_t> rows = top_alpha_rows(features, alpha);
  const std::size_t d = features.dim(1);
  std::vector<double> mean(d, 0.0);
  for (std::size_t r : rows)
    for (std::size_t j = 0; j < d; ++j) mean[j] += features.at(r, j);
  for (double& v : mean) v /= static_cast<double>(alpha);
  return mean;
}

ag::Var top_alpha_mean(const ag::Var& features, std::size_t alpha) {
  const std::vector<std::size_t> rows = top_alpha_rows(features.value(), alpha);
  return ag::mean_rows(ag::select_rows(features, rows));
}

double separability(const ag::Tensor& positive, const ag::Tensor& negative, std::size_t alpha) {
  if (positive.rank() != 2 || negative.rank() != 2 || positive.dim(1) != negative.dim(1)) {
    throw ShapeError("separability: bags must share the feature width");
  }
  return norm(top_alpha_mean(positive, alpha)) - norm(top_alpha_mean(negative, alpha));
}

ag::Var separability(const ag::Var& positive, const ag::Var& negative, std::size_t alpha) {
  if (positive.value().dim(1) != negative.value().dim(1)) {
    throw ShapeError("separability: bags must share the feature width");
  }
  return ag::sub(ag::l2_norm(top_alpha_mean(positive, alpha)), ag::l2_norm(top_alpha_mean(negative, alpha)));
}

DmtLoss dmt_loss(std::span<const ag::Var> features, std::span<const ag::Var> scores, std::span<const int> labels,
                 const DmtConfig& cfg) {
  const std::size_t total = features.size();
  if (total == 0 || total % 2 != 0 || scores.size() != total || labels.size() != total) {
    throw InvalidArgument("dmt_loss: expected 2B bags with matching scores and labels");
  }
  const std::size_t half = total / 2;
  for (std::size_t i = 0; i < total; ++i) {
    if (labels[i] != (i < half ? 0 : 1)) throw InvalidArgument("dmt_loss: batch is not laid out normal-then-abnormal");
  }

  std::vector<std::vector<std::size_t>> selected;
  std::vector<ag::Var> magnitude;
  magnitude.reserve(total);
  for (const ag::Var& f : features) {
    selected.push_back(top_alpha_rows(f.value(), cfg.alpha));
    magnitude.push_back(ag::l2_norm(ag::mean_rows(ag::select_rows(f, selected.back()))));
  }

  std::vector<ag::Var> hinges;
  hinges.reserve(half * half);
  for (std::size_t a = half; a < total; ++a) {
    for (std::size_t n = 0; n < half; ++n) {
      hinges.push_back(ag::relu(ag::add_scalar(ag::sub(magnitude[n], magnitude[a]), static_cast<float>(cfg.margin))));
    }
  }

  std::vector<ag::Var> video_scores;
  std::vector<float> targets;
  for (std::size_t i = 0; i < total; ++i) {
    const ag::Tensor& s = scores[i].value();
    if (s.size() != features[i].value().dim(0)) throw ShapeError("dmt_loss: scores and features differ in length");
    std::vector<std::size_t> top = selected[i];
    if (cfg.video_score == VideoScore::kTopScore) {
      std::vector<double> keys(s.data().begin(), s.data().end());
      top = top_by(keys, cfg.alpha);
    }
    video_scores.push_back(ag::mean(ag::select_rows(scores[i], top)));
    targets.push_back(static_cast<float>(labels[i]));
  }

  DmtLoss loss;
  loss.margin = ag::mean(ag::concat_rows(hinges));
  loss.bce = ag::binary_cross_entropy(ag::concat_rows(video_scores), targets);
  loss.total = ag::add(ag::scale(loss.margin, static_cast<float>(cfg.margin_weight)),
                       ag::scale(loss.bce, static_cast<float>(cfg.bce_weight)));
  return loss;
}

}  // namespace vad::mil
