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
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smlm/common.hpp"

namespace smlm {

// Per-point real-valued responses w'x_i, in dataset order.
using ScoreVector = Vector;

inline bool is_valid_label(int y) { return y == 1 || y == -1; }

// A full assignment of +1/-1 labels to the points of a dataset.
class LabelTuple {
 public:
  LabelTuple() = default;
  explicit LabelTuple(std::vector<int> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!is_valid_label(labels_[i])) {
        throw DataError("label at position " + std::to_string(i) +
                        " is " + std::to_string(labels_[i]) +
                        ", expected +1 or -1");
      }
    }
  }
  LabelTuple(std::initializer_list<int> labels)
      : LabelTuple(std::vector<int>(labels)) {}

  // n copies of the same label.
  static LabelTuple filled(std::size_t n, int label) {
    return LabelTuple(std::vector<int>(n, label));
  }

  std::size_t size() const { return labels_.size(); }
  int operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<int>& values() const { return labels_; }
  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }

  std::size_t n_pos() const {
    std::size_t c = 0;
    for (int y : labels_) c += (y == 1);
    return c;
  }
  std::size_t n_neg() const { return labels_.size() - n_pos(); }
  bool has_both_classes() const {
    const std::size_t p = n_pos();
    return p > 0 && p < labels_.size();
  }

  friend bool operator==(const LabelTuple&, const LabelTuple&) = default;

 private:
  std::vector<int> labels_;
};

struct LabeledPoint {
  Vector features;
  int label = 1;
};

class Dataset;
Dataset validate_dataset(std::span<const LabeledPoint> points);

// Validated, immutable collection of labeled points stored row-major.
class Dataset {
 public:
  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> features(std::size_t i) const {
    return {features_.data() + i * dim_, dim_};
  }
  int label(std::size_t i) const { return labels_[i]; }
  const LabelTuple& labels() const { return labels_; }
  std::size_t n_pos() const { return n_pos_; }
  std::size_t n_neg() const { return size() - n_pos_; }

  // Points at the given indices, in that order. Re-validated, so the subset
  // must itself contain both classes.
  Dataset subset(std::span<const std::size_t> indices) const {
    std::vector<LabeledPoint> pts;
    pts.reserve(indices.size());
    for (std::size_t i : indices) {
      if (i >= size()) throw DataError("subset index out of range");
      const auto x = features(i);
      pts.push_back({Vector(x.begin(), x.end()), labels_[i]});
    }
    return validate_dataset(pts);
  }

 private:
  friend Dataset validate_dataset(std::span<const LabeledPoint> points);
  Dataset(std::size_t dim, Vector features, LabelTuple labels)
      : dim_(dim),
        features_(std::move(features)),
        labels_(std::move(labels)),
        n_pos_(labels_.n_pos()) {}

  std::size_t dim_;
  Vector features_;
  LabelTuple labels_;
  std::size_t n_pos_;
};

inline Dataset validate_dataset(std::span<const LabeledPoint> points) {
  if (points.empty()) throw DataError("dataset is empty");
  const std::size_t d = points.front().features.size();
  if (d == 0) throw DataError("dataset has zero feature dimensions");

  Vector features;
  features.reserve(points.size() * d);
  std::vector<int> labels;
  labels.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.features.size() != d) {
      throw DataError("point " + std::to_string(i) + " has " +
                      std::to_string(p.features.size()) +
                      " features, expected " + std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(p.features[j])) {
        throw DataError("point " + std::to_string(i) + " feature " +
                        std::to_string(j) + " is not finite");
      }
    }
    if (!is_valid_label(p.label)) {
      throw DataError("point " + std::to_string(i) + " has label " +
                      std::to_string(p.label) + ", expected +1 or -1");
    }
    features.insert(features.end(), p.features.begin(), p.features.end());
    labels.push_back(p.label);
  }
  LabelTuple tuple(std::move(labels));
  if (tuple.n_pos() == 0) throw DataError("dataset has no positive points");
  if (tuple.n_neg() == 0) throw DataError("dataset has no negative points");
  return Dataset(d, std::move(features), std::move(tuple));
}

inline Dataset validate_dataset(std::initializer_list<LabeledPoint> points) {
  return validate_dataset(std::span<const LabeledPoint>(points.begin(),
                                                        points.size()));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// scores[i] = w'x_i. The label-dependent response for candidate label y is
// y * scores[i].
inline ScoreVector compute_scores(const Dataset& data,
                                  std::span<const double> w) {
  detail::require_same_length("weight vector", data.dim(), w.size());
  ScoreVector s(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) s[i] = dot(w, data.features(i));
  return s;
}

}  // namespace smlm
