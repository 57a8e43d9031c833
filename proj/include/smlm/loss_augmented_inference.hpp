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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smlm/common.hpp"
#include "smlm/data_model.hpp"
#include "smlm/likelihood_model.hpp"
#include "smlm/multivariate_losses.hpp"

namespace smlm {

// The most violated tuple y'' for a fixed score vector, the value of the
// maximized bracket, and the confusion counts of y'' against the truth.
struct InferenceResult {
  LabelTuple most_violated;
  double violation = 0.0;
  ContingencyCounts counts;
};

namespace detail {

inline void check_inference_inputs(std::span<const double> scores,
                                   const LabelTuple& truth) {
  require_same_length("truth tuple", scores.size(), truth.size());
  if (!truth.has_both_classes()) {
    throw DataError("truth tuple must contain both classes");
  }
}

}  // namespace detail

// Exact maximizer over all label tuples y' of
//
//   G(y') = sum_i log s(y'_i s_i) - sum_i log s(y_i s_i) + Delta(y, y').
//
// Changing point i away from its true label costs exactly -y_i s_i, so within
// a cell of fixed (a, b) the best tuple keeps the a highest-scored positives
// and the b highest-scored negatives labeled +1. The scan over all cells is
// O(n_pos * n_neg); equal values keep the smallest a, then the smallest b.
inline InferenceResult find_most_violated(std::span<const double> scores,
                                          const LabelTuple& truth,
                                          LossKind kind) {
  detail::check_inference_inputs(scores, truth);

  std::vector<std::size_t> pos, neg;
  for (std::size_t i : rank_by_score(scores)) {
    (truth[i] == 1 ? pos : neg).push_back(i);
  }
  const std::size_t n_pos = pos.size();
  const std::size_t n_neg = neg.size();

  // flipped_pos[a]: sum of the scores of positives ranked a.. (labeled -1).
  Vector flipped_pos(n_pos + 1, 0.0);
  for (std::size_t r = n_pos; r-- > 0;) {
    flipped_pos[r] = flipped_pos[r + 1] + scores[pos[r]];
  }
  // promoted_neg[b]: sum of the scores of the top b negatives (labeled +1).
  Vector promoted_neg(n_neg + 1, 0.0);
  for (std::size_t r = 0; r < n_neg; ++r) {
    promoted_neg[r + 1] = promoted_neg[r] + scores[neg[r]];
  }

  std::size_t best_a = 0, best_b = 0;
  double best = -INFINITY;
  auto consider = [&](std::size_t a, std::size_t b) {
    const double g = promoted_neg[b] - flipped_pos[a] +
                     detail::delta_unchecked(kind, a, b, n_pos, n_neg);
    if (g > best) {
      best = g;
      best_a = a;
      best_b = b;
    }
  };
  if (kind == LossKind::kPrbep) {
    const std::size_t a_min = n_pos > n_neg ? n_pos - n_neg : 0;
    for (std::size_t a = a_min; a <= n_pos; ++a) consider(a, n_pos - a);
  } else {
    for (std::size_t a = 0; a <= n_pos; ++a) {
      for (std::size_t b = 0; b <= n_neg; ++b) consider(a, b);
    }
  }

  std::vector<int> y(scores.size(), -1);
  for (std::size_t r = 0; r < best_a; ++r) y[pos[r]] = 1;
  for (std::size_t r = 0; r < best_b; ++r) y[neg[r]] = 1;
  return {LabelTuple(std::move(y)), best, {best_a, best_b, n_pos, n_neg}};
}

// The bracket of the upper bound for a fixed y'':
//   sum_i log((1 + exp(-y_i s_i)) / (1 + exp(-y''_i s_i))) + Delta(y, y'').
inline double surrogate_value(std::span<const double> scores,
                              const LabelTuple& truth,
                              const LabelTuple& most_violated, LossKind kind) {
  detail::require_same_length("truth tuple", scores.size(), truth.size());
  detail::require_same_length("most violated tuple", scores.size(),
                              most_violated.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    sum += log_sigmoid(most_violated[i] * scores[i]) -
           log_sigmoid(truth[i] * scores[i]);
  }
  return sum + delta(kind, truth, most_violated);
}

// Upper bound on the loss of the maximum-likelihood prediction.
inline double upper_bound_value(std::span<const double> scores,
                                const LabelTuple& truth, LossKind kind) {
  const auto inf = find_most_violated(scores, truth, kind);
  return surrogate_value(scores, truth, inf.most_violated, kind);
}

// Loss of the maximum-likelihood prediction, the quantity the upper bound
// dominates. PRBEP is only defined at the break-even point, so its prediction
// is the likelihood maximizer with exactly n_pos positives.
inline double prediction_loss(std::span<const double> scores,
                              const LabelTuple& truth, LossKind kind) {
  detail::check_inference_inputs(scores, truth);
  const LabelTuple pred = kind == LossKind::kPrbep
                              ? predict_top_k(scores, truth.n_pos())
                              : predict_labels(scores);
  return delta(kind, truth, pred);
}

inline constexpr std::size_t kBruteForceMaxPoints = 20;

// Exhaustive search over all 2^n tuples (break-even tuples only for PRBEP),
// evaluating G directly from log-sigmoid terms. Values within a relative
// 1e-12 of the best are treated as ties and resolved toward the smallest
// (a, b), matching find_most_violated.
inline InferenceResult brute_force_most_violated(std::span<const double> scores,
                                                 const LabelTuple& truth,
                                                 LossKind kind) {
  detail::check_inference_inputs(scores, truth);
  const std::size_t n = scores.size();
  if (n > kBruteForceMaxPoints) {
    throw ConfigError("brute force inference limited to " +
                      std::to_string(kBruteForceMaxPoints) + " points, got " +
                      std::to_string(n));
  }
  const std::size_t n_pos = truth.n_pos();
  const std::size_t n_neg = n - n_pos;

  Vector base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = log_sigmoid(truth[i] * scores[i]);

  bool found = false;
  double best = 0.0;
  std::uint32_t best_mask = 0;
  ContingencyCounts best_counts;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    ContingencyCounts c{0, 0, n_pos, n_neg};
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1U) (truth[i] == 1 ? c.a : c.b) += 1;
    }
    if (kind == LossKind::kPrbep && c.a + c.b != n_pos) continue;

    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int yi = ((mask >> i) & 1U) ? 1 : -1;
      g += log_sigmoid(yi * scores[i]) - base[i];
    }
    g += detail::delta_unchecked(kind, c.a, c.b, n_pos, n_neg);

    const double tol = 1e-12 * std::max(1.0, std::abs(best));
    const bool better = !found || g > best + tol;
    const bool tie = found && std::abs(g - best) <= tol &&
                     (c.a < best_counts.a ||
                      (c.a == best_counts.a && c.b < best_counts.b));
    if (better || tie) {
      found = true;
      best = g;
      best_mask = mask;
      best_counts = c;
    }
  }

  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = ((best_mask >> i) & 1U) ? 1 : -1;
  return {LabelTuple(std::move(y)), best, best_counts};
}

}  // namespace smlm
