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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "smlm/loss_augmented_inference.hpp"

namespace smlm {
namespace {

constexpr LossKind kAllKinds[] = {LossKind::kFScore, LossKind::kAuroc,
                                  LossKind::kPrbep};

// G(y') evaluated from scratch with plain exp/log.
double naive_g(const Vector& s, const LabelTuple& truth, const LabelTuple& y,
               LossKind kind) {
  double g = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    g += std::log(testing::naive_sigmoid(y[i] * s[i])) -
         std::log(testing::naive_sigmoid(truth[i] * s[i]));
  }
  return g + delta(kind, truth, y);
}

TEST(FindMostViolated, ZeroScoresMaximizeLossAlone) {
  const LabelTuple truth{1, 1, -1, -1};
  const auto r = find_most_violated(Vector(4, 0.0), truth, LossKind::kFScore);
  EXPECT_EQ(r.counts.a, 0u);
  EXPECT_EQ(r.counts.b, 0u);  // smallest b among the tied a = 0 cells
  EXPECT_EQ(r.violation, 1.0);
  EXPECT_EQ(r.most_violated, LabelTuple({-1, -1, -1, -1}));
  EXPECT_EQ(upper_bound_value(Vector(4, 0.0), truth, LossKind::kFScore), 1.0);
}

TEST(FindMostViolated, StronglyCorrectScores) {
  // y_i s_i >= 10 everywhere: flipping any point costs at least 10.
  const LabelTuple truth{1, -1, 1, -1, 1};
  const Vector s{10.0, -12.0, 15.0, -10.5, 11.0};
  for (auto kind : kAllKinds) {
    const auto r = find_most_violated(s, truth, kind);
    EXPECT_GE(r.violation, 0.0);
    EXPECT_NEAR(r.violation, 0.0, 1e-6);
    EXPECT_EQ(r.most_violated, truth);
    EXPECT_GE(delta(kind, truth, r.most_violated), 0.0);
  }
}

TEST(FindMostViolated, Errors) {
  EXPECT_THROW(find_most_violated(Vector{1.0, 2.0}, {1, 1}, LossKind::kAuroc),
               DataError);
  EXPECT_THROW(find_most_violated(Vector{1.0}, {1, -1}, LossKind::kAuroc),
               DataError);
}

TEST(FindMostViolated, ViolationEqualsUpperBoundValue) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 30;
    const auto truth = testing::random_two_class_labels(rng, n);
    const auto s = testing::random_vector(rng, n, 3.0);
    for (auto kind : kAllKinds) {
      const auto r = find_most_violated(s, truth, kind);
      EXPECT_NEAR(r.violation, upper_bound_value(s, truth, kind), 1e-10);
      EXPECT_NEAR(r.violation, naive_g(s, truth, r.most_violated, kind), 1e-10);
      EXPECT_EQ(r.counts, counts_from_tuples(truth, r.most_violated));
      EXPECT_GE(r.violation, -1e-12);
    }
  }
}

TEST(FindMostViolated, MatchesBruteForce) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 11;
    const auto truth = testing::random_two_class_labels(rng, n);
    const auto s = testing::random_vector(rng, n, 2.0);
    for (auto kind : kAllKinds) {
      const auto fast = find_most_violated(s, truth, kind);
      const auto slow = brute_force_most_violated(s, truth, kind);
      EXPECT_NEAR(fast.violation, slow.violation,
                  1e-12 * std::max(1.0, std::abs(slow.violation)));
      EXPECT_EQ(fast.counts, slow.counts);
    }
  }
}

TEST(FindMostViolated, WithinCellSwapsNeverImprove) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + trial % 20;
    const auto truth = testing::random_two_class_labels(rng, n);
    const auto s = testing::random_vector(rng, n, 2.0);
    for (auto kind : kAllKinds) {
      const auto r = find_most_violated(s, truth, kind);
      const double g = naive_g(s, truth, r.most_violated, kind);
      // Exchange one selected and one unselected point of the same class.
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (truth[i] != truth[j]) continue;
          if (r.most_violated[i] != 1 || r.most_violated[j] != -1) continue;
          auto y = r.most_violated.values();
          std::swap(y[i], y[j]);
          EXPECT_LE(naive_g(s, truth, LabelTuple(y), kind), g + 1e-12);
        }
      }
    }
  }
}

TEST(BruteForce, TwoPointsByHand) {
  const LabelTuple truth{1, -1};
  const Vector s{0.3, 0.8};
  // Enumerate the four tuples here and keep the best.
  double best = -INFINITY;
  for (int a : {1, -1}) {
    for (int b : {1, -1}) {
      best = std::max(best, naive_g(s, truth, LabelTuple({a, b}),
                                    LossKind::kAuroc));
    }
  }
  EXPECT_NEAR(brute_force_most_violated(s, truth, LossKind::kAuroc).violation,
              best, 1e-14);
}

TEST(BruteForce, PrbepOnlyConsidersBreakEvenTuples) {
  const LabelTuple truth{1, 1, -1, -1};
  const Vector s{-2.0, -1.0, 3.0, 4.0};
  const auto r = brute_force_most_violated(s, truth, LossKind::kPrbep);
  EXPECT_EQ(r.counts.a + r.counts.b, 2u);
  std::size_t positives = 0;
  for (int y : r.most_violated) positives += (y == 1);
  EXPECT_EQ(positives, 2u);
}

TEST(BruteForce, SizeLimitEnforced) {
  const auto truth = LabelTuple::filled(21, 1);
  std::vector<int> y = truth.values();
  y[0] = -1;
  EXPECT_THROW(
      brute_force_most_violated(Vector(21, 0.1), LabelTuple(y), LossKind::kFScore),
      ConfigError);
}

TEST(UpperBound, DominatesPredictionLoss) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 10;
    const auto truth = testing::random_two_class_labels(rng, n);
    const auto s = testing::random_vector(rng, n, 1.5);
    for (auto kind : kAllKinds) {
      EXPECT_GE(upper_bound_value(s, truth, kind) - prediction_loss(s, truth, kind),
                -1e-12);
    }
  }
}

TEST(UpperBound, HugeMarginsGiveSmallNonNegativeValue) {
  const LabelTuple truth{1, 1, -1, -1};
  const Vector s{500.0, 800.0, -600.0, -900.0};
  for (auto kind : kAllKinds) {
    const double v = upper_bound_value(s, truth, kind);
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1e-9);
  }
}

}  // namespace
}  // namespace smlm
