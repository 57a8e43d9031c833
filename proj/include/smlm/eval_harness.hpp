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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "smlm/common.hpp"
#include "smlm/data_model.hpp"
#include "smlm/likelihood_model.hpp"
#include "smlm/multivariate_losses.hpp"
#include "smlm/sparse_fista_trainer.hpp"

namespace smlm {

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

// 2TP / (2TP + FP + FN); zero when there is no true positive.
inline double fscore_from_predictions(const LabelTuple& truth,
                                      const LabelTuple& pred) {
  const auto c = counts_from_tuples(truth, pred);
  if (c.tp() == 0) return 0.0;
  const double tp = static_cast<double>(c.tp());
  return 2.0 * tp / (2.0 * tp + static_cast<double>(c.fp() + c.fn()));
}

// Mann-Whitney estimate of the area under the ROC curve: the fraction of
// (positive, negative) pairs ranked correctly, tied pairs counting 1/2.
// Computed in O(n log n) from tie groups with an exact integer numerator.
inline double auroc_from_scores(const LabelTuple& truth,
                                std::span<const double> scores) {
  detail::require_same_length("score vector", truth.size(), scores.size());
  if (!truth.has_both_classes()) {
    throw DataError("AUROC needs both classes in the truth tuple");
  }
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return scores[l] < scores[r];
  });

  // Twice the number of correctly ordered pairs plus the tied pairs.
  std::uint64_t twice_correct = 0;
  std::uint64_t neg_below = 0;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g;
    std::uint64_t p = 0, q = 0;
    while (end < order.size() && scores[order[end]] == scores[order[g]]) {
      (truth[order[end]] == 1 ? p : q) += 1;
      ++end;
    }
    twice_correct += 2 * p * neg_below + p * q;
    neg_below += q;
    g = end;
  }
  const double pairs = static_cast<double>(truth.n_pos()) *
                       static_cast<double>(truth.n_neg());
  return static_cast<double>(twice_correct) / (2.0 * pairs);
}

// Confusion counts at the break-even threshold: the n_pos highest-scored
// points (ties by index) are predicted positive, so a + b == n_pos.
inline ContingencyCounts break_even_counts(const LabelTuple& truth,
                                           std::span<const double> scores) {
  detail::require_same_length("score vector", truth.size(), scores.size());
  return counts_from_tuples(truth, predict_top_k(scores, truth.n_pos()));
}

// Precision (= recall) at the break-even threshold.
inline double prbep_from_scores(const LabelTuple& truth,
                                std::span<const double> scores) {
  const auto c = break_even_counts(truth, scores);
  return static_cast<double>(c.a) / static_cast<double>(c.n_pos);
}

// ---------------------------------------------------------------------------
// Portable seeded randomness
// ---------------------------------------------------------------------------

namespace detail {

// Uniform integer in [0, bound] from a 64-bit Mersenne Twister by rejection,
// so the sequence is identical across standard library implementations.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t range = bound + 1;
  if (range == 0) return rng();
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % range;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i-- > 1;) {
    std::swap(perm[i], perm[uniform_index(rng, i)]);
  }
  return perm;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

// Fold membership. Points are shuffled with a Fisher-Yates pass driven by
// std::mt19937_64(seed) (index j drawn uniformly from [0, i] by rejection on
// the raw 64-bit output), then the point at shuffled position p joins fold
// p mod k.
struct FoldSplit {
  std::size_t k = 0;
  std::vector<std::size_t> assignment;

  std::vector<std::size_t> test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i] == fold) out.push_back(i);
    }
    return out;
  }
  std::vector<std::size_t> train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i] != fold) out.push_back(i);
    }
    return out;
  }
};

inline FoldSplit make_fold_split(std::size_t n, std::size_t k,
                                 std::uint64_t seed) {
  if (k < 2) throw ConfigError("k must be >= 2");
  if (k > n) {
    throw ConfigError("k=" + std::to_string(k) + " exceeds the " +
                      std::to_string(n) + " available points");
  }
  const auto perm = detail::shuffled_indices(n, seed);
  FoldSplit split{k, std::vector<std::size_t>(n)};
  for (std::size_t p = 0; p < n; ++p) split.assignment[perm[p]] = p % k;
  return split;
}

struct FoldMetrics {
  double fscore = 0.0;
  double auroc = 0.0;
  double prbep = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;

  friend bool operator==(const FoldMetrics&, const FoldMetrics&) = default;
};

struct MetricReport {
  double fscore = 0.0;
  double auroc = 0.0;
  double prbep = 0.0;
  std::vector<FoldMetrics> per_fold;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// Everything a cross-validation run produces. `report` is a pure function of
// (data, config, k, seed); the timings are not.
struct CrossValidation {
  MetricReport report;
  FoldSplit split;
  std::uint64_t split_seed = 0;
  std::vector<std::vector<double>> objective_traces;
  std::vector<double> fold_seconds;
};

inline constexpr int kMaxSplitAttempts = 10;

namespace detail {

inline bool split_keeps_classes(const Dataset& data, const FoldSplit& split) {
  for (std::size_t f = 0; f < split.k; ++f) {
    std::size_t test_pos = 0, test_n = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (split.assignment[i] != f) continue;
      ++test_n;
      test_pos += (data.label(i) == 1);
    }
    const std::size_t train_pos = data.n_pos() - test_pos;
    const std::size_t train_n = data.size() - test_n;
    if (test_pos == 0 || test_pos == test_n) return false;
    if (train_pos == 0 || train_pos == train_n) return false;
  }
  return true;
}

struct FoldOutcome {
  FoldMetrics metrics;
  std::vector<double> trace;
  double seconds = 0.0;
};

inline FoldOutcome run_fold(const Dataset& data, const FoldSplit& split,
                            std::size_t fold, const TrainConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto train_idx = split.train_indices(fold);
  const auto test_idx = split.test_indices(fold);
  const Dataset train = data.subset(train_idx);
  const Dataset test = data.subset(test_idx);

  TrainResult fitted = fit(train, config);
  const auto scores = compute_scores(test, fitted.model.w);
  FoldOutcome out;
  out.metrics.fscore =
      fscore_from_predictions(test.labels(), predict_labels(scores));
  out.metrics.auroc = auroc_from_scores(test.labels(), scores);
  out.metrics.prbep = prbep_from_scores(test.labels(), scores);
  out.metrics.train_size = train.size();
  out.metrics.test_size = test.size();
  out.trace = std::move(fitted.objective_trace);
  out.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

}  // namespace detail

// k-fold cross-validation. A split is accepted only if every training and
// every held-out fold contains both classes; otherwise the split is redrawn
// with seed + 1, seed + 2, ... up to kMaxSplitAttempts draws.
inline CrossValidation cross_validate(const Dataset& data,
                                      const TrainConfig& config, std::size_t k,
                                      std::uint64_t seed,
                                      std::size_t workers = 1) {
  config.validate();
  CrossValidation cv;
  bool ok = false;
  for (int attempt = 0; attempt < kMaxSplitAttempts && !ok; ++attempt) {
    cv.split_seed = seed + static_cast<std::uint64_t>(attempt);
    cv.split = make_fold_split(data.size(), k, cv.split_seed);
    ok = detail::split_keeps_classes(data, cv.split);
  }
  if (!ok) {
    throw DataError("could not draw a " + std::to_string(k) +
                    "-fold split with both classes in every training and "
                    "test fold after " +
                    std::to_string(kMaxSplitAttempts) + " attempts");
  }

  std::vector<detail::FoldOutcome> outcomes(k);
  if (workers <= 1) {
    for (std::size_t f = 0; f < k; ++f) {
      outcomes[f] = detail::run_fold(data, cv.split, f, config);
    }
  } else {
    for (std::size_t start = 0; start < k; start += workers) {
      const std::size_t stop = std::min(k, start + workers);
      std::vector<std::future<detail::FoldOutcome>> running;
      for (std::size_t f = start; f < stop; ++f) {
        running.push_back(std::async(std::launch::async, [&, f] {
          return detail::run_fold(data, cv.split, f, config);
        }));
      }
      for (std::size_t f = start; f < stop; ++f) {
        outcomes[f] = running[f - start].get();
      }
    }
  }

  for (auto& o : outcomes) {
    cv.report.per_fold.push_back(o.metrics);
    cv.report.fscore += o.metrics.fscore;
    cv.report.auroc += o.metrics.auroc;
    cv.report.prbep += o.metrics.prbep;
    cv.objective_traces.push_back(std::move(o.trace));
    cv.fold_seconds.push_back(o.seconds);
  }
  const double kd = static_cast<double>(k);
  cv.report.fscore /= kd;
  cv.report.auroc /= kd;
  cv.report.prbep /= kd;
  return cv;
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

struct SyntheticParams {
  std::size_t n = 200;
  std::size_t d = 10;
  std::size_t informative_dims = 1;
  double margin = 2.0;
  double flip_prob = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  Dataset dataset;
  // Coordinates the separating direction is supported on, ascending.
  std::vector<std::size_t> support;
  // Unit separating direction; zero outside `support`.
  Vector direction;
};

// Two clusters on either side of the hyperplane orthogonal to a random unit
// direction u supported on `informative_dims` random coordinates. Along u a
// point of class y sits at y * (margin / 2 + |z|), z ~ N(0, 1); orthogonal to
// u it is isotropic standard normal. Without label flips the classes are
// separated by a gap of `margin` along u. Labels are then flipped
// independently with probability flip_prob.
inline SyntheticData make_synthetic(const SyntheticParams& p) {
  if (p.n < 2) throw ConfigError("synthetic data needs n >= 2");
  if (p.d < 1) throw ConfigError("synthetic data needs d >= 1");
  if (p.informative_dims < 1 || p.informative_dims > p.d) {
    throw ConfigError("informative_dims must be in [1, d]");
  }
  if (!(p.margin >= 0.0) || !std::isfinite(p.margin)) {
    throw ConfigError("margin must be finite and >= 0");
  }
  if (!(p.flip_prob >= 0.0 && p.flip_prob < 1.0)) {
    throw ConfigError("flip_prob must be in [0, 1)");
  }

  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto coords = detail::shuffled_indices(p.d, rng());
  std::vector<std::size_t> support(coords.begin(),
                                   coords.begin() + p.informative_dims);
  std::sort(support.begin(), support.end());

  Vector u(p.d, 0.0);
  double norm = 0.0;
  while (norm < 1e-12) {
    norm = 0.0;
    for (std::size_t j : support) {
      u[j] = normal(rng);
      norm += u[j] * u[j];
    }
    norm = std::sqrt(norm);
  }
  for (double& v : u) v /= norm;

  std::vector<int> y(p.n);
  for (auto& label : y) label = detail::uniform_unit(rng) < 0.5 ? 1 : -1;
  if (std::all_of(y.begin(), y.end(), [&](int v) { return v == y[0]; })) {
    y.back() = -y[0];
  }

  std::vector<LabeledPoint> pts(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    Vector x(p.d);
    for (double& v : x) v = normal(rng);
    const double along = dot(x, u);
    const double offset = y[i] * (0.5 * p.margin + std::abs(normal(rng)));
    for (std::size_t j = 0; j < p.d; ++j) x[j] += (offset - along) * u[j];
    pts[i] = {std::move(x), y[i]};
  }
  if (p.flip_prob > 0.0) {
    for (auto& pt : pts) {
      if (detail::uniform_unit(rng) < p.flip_prob) pt.label = -pt.label;
    }
    std::size_t pos = 0;
    for (const auto& pt : pts) pos += (pt.label == 1);
    if (pos == 0 || pos == pts.size()) pts.back().label = -pts.back().label;
  }
  return {validate_dataset(pts), std::move(support), std::move(u)};
}

inline SyntheticData make_synthetic(std::size_t n, std::size_t d,
                                    std::size_t informative_dims,
                                    double margin, double flip_prob,
                                    std::uint64_t seed) {
  return make_synthetic(
      SyntheticParams{n, d, informative_dims, margin, flip_prob, seed});
}

}  // namespace smlm
