/*
 * Copyright 2026 The SMLM Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "smlm/common.hpp"
#include "smlm/data_model.hpp"
#include "smlm/types.hpp"

namespace smlm {

struct TrainMeta {
  double C = 0.0;
  double L = 0.0;
  double epsilon = 0.0;
  std::size_t iterations_run = 0;
  double final_objective = 0.0;
};

// The learned artifact: a bias-free linear scorer plus the loss it was
// trained for. Append a constant feature to emulate an intercept.
struct Model {
  Vector w;
  LossKind loss_kind = LossKind::kFScore;
  TrainMeta train_meta;

  std::size_t dim() const { return w.size(); }
};

// log(1 / (1 + exp(-z))), without overflow for large |z|.
inline double log_sigmoid(double z) {
  if (z >= 0.0) return -std::log1p(std::exp(-z));
  return z - std::log1p(std::exp(z));
}

// Probability of `label` given a point with response `score`.
inline double sigmoid_prob(double score, int label) {
  const double z = label * score;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Sum of per-point log-probabilities; the tuple likelihood factorizes.
inline double tuple_log_likelihood(std::span<const double> scores,
                                   const LabelTuple& labels) {
  detail::require_same_length("label tuple", scores.size(), labels.size());
  double ll = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    ll += log_sigmoid(labels[i] * scores[i]);
  }
  return ll;
}

// Maximum-likelihood tuple: each point independently takes the sign of its
// score. A score of exactly zero maps to +1.
inline LabelTuple predict_labels(std::span<const double> scores) {
  std::vector<int> y(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    y[i] = scores[i] >= 0.0 ? 1 : -1;
  }
  return LabelTuple(std::move(y));
}

inline LabelTuple predict(const Model& model, const Dataset& data) {
  return predict_labels(compute_scores(data, model.w));
}

// Indices ordered by score descending; equal scores keep index order.
inline std::vector<std::size_t> rank_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) {
                     return scores[l] > scores[r];
                   });
  return order;
}

// Maximum-likelihood tuple among those with exactly `n_positive` points
// labeled +1: the top-scoring points, ties broken by index.
inline LabelTuple predict_top_k(std::span<const double> scores,
                                std::size_t n_positive) {
  if (n_positive > scores.size()) {
    throw DataError("cannot label more points positive than exist");
  }
  std::vector<int> y(scores.size(), -1);
  const auto order = rank_by_score(scores);
  for (std::size_t r = 0; r < n_positive; ++r) y[order[r]] = 1;
  return LabelTuple(std::move(y));
}

}  // namespace smlm
