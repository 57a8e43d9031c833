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

// Independent reference computations used only by the test suites. None of
// these call into the code paths they are used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "smlm/smlm.hpp"

namespace smlm::testing {

// Random instance for inference and bound checks.
struct Instance {
  Vector scores;
  LabelTuple truth;
};

inline LabelTuple random_two_class_labels(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  std::vector<int> y(n);
  do {
    for (auto& v : y) v = coin(rng) ? 1 : -1;
  } while (std::all_of(y.begin(), y.end(), [&](int v) { return v == y[0]; }));
  return LabelTuple(std::move(y));
}

inline std::vector<LabeledPoint> random_points(std::mt19937_64& rng,
                                               std::size_t n, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto y = random_two_class_labels(rng, n);
  std::vector<LabeledPoint> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i].features.resize(d);
    for (auto& v : pts[i].features) v = normal(rng);
    pts[i].label = y[i];
  }
  return pts;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t d,
                            double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector w(d);
  for (auto& v : w) v = normal(rng);
  return w;
}

// Textbook logistic probability, no branch for stability.
inline double naive_sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Scores as a second, column-major summation.
inline Vector naive_scores(const std::vector<LabeledPoint>& pts, const Vector& w) {
  Vector s(pts.size(), 0.0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    for (std::size_t i = 0; i < pts.size(); ++i) s[i] += pts[i].features[j] * w[j];
  }
  return s;
}

// Calls fn(tuple) for every element of {+1,-1}^n.
inline void for_each_tuple(std::size_t n,
                           const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> y(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) y[i] = ((mask >> i) & 1U) ? 1 : -1;
    fn(y);
  }
}

// log of the explicit product of per-point probabilities.
inline double product_log_likelihood(const Vector& scores,
                                     const std::vector<int>& y) {
  double p = 1.0;
  for (std::size_t i = 0; i < scores.size(); ++i) p *= naive_sigmoid(y[i] * scores[i]);
  return std::log(p);
}

// Exhaustive argmax of the tuple likelihood; returns the tuple and value.
inline std::pair<std::vector<int>, double> brute_force_ml_tuple(
    const Vector& scores) {
  std::vector<int> best;
  double best_ll = -INFINITY;
  for_each_tuple(scores.size(), [&](const std::vector<int>& y) {
    const double ll = product_log_likelihood(scores, y);
    if (ll > best_ll) {
      best_ll = ll;
      best = y;
    }
  });
  return {best, best_ll};
}

inline ContingencyCounts naive_counts(const LabelTuple& truth,
                                      const LabelTuple& pred) {
  ContingencyCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1) c.n_pos++;
    if (truth[i] == -1) c.n_neg++;
  }
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1 && pred[i] == 1) c.a++;
    if (truth[i] == -1 && pred[i] == 1) c.b++;
  }
  return c;
}

// Fraction of positive/negative pairs ordered correctly, ties 1/2, O(n^2).
inline double pairwise_auc(const LabelTuple& truth, const Vector& scores) {
  double correct = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != 1) continue;
    for (std::size_t j = 0; j < truth.size(); ++j) {
      if (truth[j] != -1) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) correct += 1.0;
      else if (scores[i] == scores[j]) correct += 0.5;
    }
  }
  return correct / pairs;
}

// Frozen surrogate with fixed reweighting and fixed y'':
//   (1/2) w'Lw + C [ sum_i log((1+e^{-y s})/(1+e^{-y'' s})) + Delta ]
// written with plain exp/log.
inline double frozen_surrogate(const std::vector<LabeledPoint>& pts,
                               const Vector& w, const Vector& lambda,
                               const LabelTuple& y_dd, double delta_value,
                               double C) {
  double quad = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) quad += lambda[j] * w[j] * w[j];
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * pts[i].features[j];
    sum += std::log((1.0 + std::exp(-pts[i].label * s)) /
                    (1.0 + std::exp(-y_dd[i] * s)));
  }
  return 0.5 * quad + C * (sum + delta_value);
}

inline Vector central_differences(const std::function<double(const Vector&)>& f,
                                  const Vector& w, double h) {
  Vector g(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    Vector plus = w, minus = w;
    plus[j] += h;
    minus[j] -= h;
    g[j] = (f(plus) - f(minus)) / (2.0 * h);
  }
  return g;
}

inline double relative_error(const Vector& a, const Vector& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    num += (a[j] - b[j]) * (a[j] - b[j]);
    den += b[j] * b[j];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

// Data term of the subgradient summed directly over all points, in the
// textbook exp-ratio form.
inline Vector naive_data_gradient(const std::vector<LabeledPoint>& pts,
                                  const Vector& w, const LabelTuple& y_dd) {
  Vector g(w.size(), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * pts[i].features[j];
    const int y = pts[i].label, yd = y_dd[i];
    const double c = yd * std::exp(-yd * s) / (1.0 + std::exp(-yd * s)) -
                     y * std::exp(-y * s) / (1.0 + std::exp(-y * s));
    for (std::size_t j = 0; j < w.size(); ++j) g[j] += c * pts[i].features[j];
  }
  return g;
}

}  // namespace smlm::testing
