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
#include "smlm/data_model.hpp"

namespace smlm {
namespace {

TEST(ValidateDataset, SmallestLegalDataset) {
  const auto ds = validate_dataset({{{1.0, 0.0}, 1}, {{0.0, 1.0}, -1}});
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.dim(), 2u);
  EXPECT_EQ(ds.n_pos(), 1u);
  EXPECT_EQ(ds.n_neg(), 1u);
  EXPECT_EQ(ds.features(0)[0], 1.0);
  EXPECT_EQ(ds.label(1), -1);
}

TEST(ValidateDataset, RejectsDimensionMismatch) {
  EXPECT_THROW(validate_dataset({{{1.0, 0.0}, 1}, {{0.0, 1.0, 2.0}, -1}}),
               DataError);
}

TEST(ValidateDataset, RejectsMissingClass) {
  EXPECT_THROW(validate_dataset({{{1.0}, 1}, {{2.0}, 1}}), DataError);
  EXPECT_THROW(validate_dataset({{{1.0}, -1}, {{2.0}, -1}}), DataError);
}

TEST(ValidateDataset, RejectsBadLabelAndNonFinite) {
  EXPECT_THROW(validate_dataset({{{1.0}, 1}, {{2.0}, 0}}), DataError);
  EXPECT_THROW(validate_dataset({{{NAN}, 1}, {{2.0}, -1}}), DataError);
  EXPECT_THROW(validate_dataset({{{INFINITY}, 1}, {{2.0}, -1}}), DataError);
  EXPECT_THROW(validate_dataset(std::span<const LabeledPoint>{}), DataError);
}

TEST(ValidateDataset, PreservesOrder) {
  std::mt19937_64 rng(3);
  const auto pts = testing::random_points(rng, 9, 3);
  const auto ds = validate_dataset(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(ds.label(i), pts[i].label);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(ds.features(i)[j], pts[i].features[j]);
  }
}

TEST(LabelTuple, RejectsNonSignLabels) {
  EXPECT_THROW(LabelTuple({1, 2}), DataError);
  EXPECT_NO_THROW(LabelTuple({1, -1, 1}));
}

TEST(ComputeScores, ZeroWeightsGiveZeroScores) {
  const auto ds = validate_dataset({{{3.0, 7.0}, 1}, {{-1.0, 2.0}, -1}});
  for (double s : compute_scores(ds, Vector{0.0, 0.0})) EXPECT_EQ(s, 0.0);
}

TEST(ComputeScores, UnitSelector) {
  const auto ds = validate_dataset({{{3.0, 7.0}, 1}, {{-1.0, 2.0}, -1}});
  EXPECT_EQ(compute_scores(ds, Vector{1.0, 0.0})[0], 3.0);
}

TEST(ComputeScores, LengthMismatchThrows) {
  const auto ds = validate_dataset({{{3.0, 7.0}, 1}, {{-1.0, 2.0}, -1}});
  EXPECT_THROW(compute_scores(ds, Vector{1.0}), DataError);
}

TEST(ComputeScores, MatchesIndependentSummation) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = testing::random_points(rng, 12, 5);
    const auto w = testing::random_vector(rng, 5);
    const auto got = compute_scores(validate_dataset(pts), w);
    const auto want = testing::naive_scores(pts, w);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_NEAR(got[i], want[i], 1e-12 * (1.0 + std::abs(want[i])));
    }
  }
}

TEST(ComputeScores, LinearInWeightsAndAntisymmetricInLabel) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = validate_dataset(testing::random_points(rng, 10, 4));
    const auto w1 = testing::random_vector(rng, 4);
    const auto w2 = testing::random_vector(rng, 4);
    Vector sum(4);
    for (std::size_t j = 0; j < 4; ++j) sum[j] = w1[j] + w2[j];
    const auto s1 = compute_scores(ds, w1), s2 = compute_scores(ds, w2),
               s12 = compute_scores(ds, sum);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const double expect = s1[i] + s2[i];
      EXPECT_NEAR(s12[i], expect,
                  1e-12 * std::max({1.0, std::abs(s1[i]), std::abs(s2[i])}));
      // f(x, +1) = -f(x, -1)
      EXPECT_EQ(1 * s1[i], -(-1 * s1[i]));
    }
  }
}

TEST(Dataset, SubsetRevalidates) {
  const auto ds = validate_dataset({{{1.0}, 1}, {{2.0}, -1}, {{3.0}, 1}});
  const std::vector<std::size_t> keep{2, 1};
  const auto sub = ds.subset(keep);
  EXPECT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub.features(0)[0], 3.0);
  const std::vector<std::size_t> one_class{0, 2};
  EXPECT_THROW(ds.subset(one_class), DataError);
}

}  // namespace
}  // namespace smlm
