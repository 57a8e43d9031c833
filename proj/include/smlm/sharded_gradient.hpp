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
#include <cstddef>
#include <future>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "smlm/common.hpp"
#include "smlm/data_model.hpp"
#include "smlm/likelihood_model.hpp"

namespace smlm {

// Partition of point indices [0, n) into m shards.
class ShardPlan {
 public:
  // m contiguous blocks whose sizes differ by at most one.
  static ShardPlan contiguous(std::size_t n, std::size_t m) {
    if (m == 0) throw ConfigError("shard count must be at least 1");
    std::vector<std::size_t> assignment(n);
    const std::size_t base = n / m, extra = n % m;
    std::size_t i = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t len = base + (j < extra ? 1 : 0);
      for (std::size_t t = 0; t < len; ++t) assignment[i++] = j;
    }
    return ShardPlan(m, std::move(assignment));
  }

  // assignment[i] is the shard of point i.
  static ShardPlan from_assignment(std::vector<std::size_t> assignment,
                                   std::size_t m) {
    if (m == 0) throw ConfigError("shard count must be at least 1");
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i] >= m) {
        throw ConfigError("point " + std::to_string(i) +
                          " assigned to shard " +
                          std::to_string(assignment[i]) + " of " +
                          std::to_string(m));
      }
    }
    return ShardPlan(m, std::move(assignment));
  }

  std::size_t num_shards() const { return m_; }
  std::size_t num_points() const { return assignment_.size(); }
  const std::vector<std::size_t>& assignment() const { return assignment_; }

  // Member indices of each shard, ascending.
  std::vector<std::vector<std::size_t>> members() const {
    std::vector<std::vector<std::size_t>> out(m_);
    for (std::size_t i = 0; i < assignment_.size(); ++i) {
      out[assignment_[i]].push_back(i);
    }
    return out;
  }

 private:
  ShardPlan(std::size_t m, std::vector<std::size_t> assignment)
      : m_(m), assignment_(std::move(assignment)) {}

  std::size_t m_;
  std::vector<std::size_t> assignment_;
};

// Per-point summand of the data term of the subgradient:
//   y''_i x_i s(-y''_i w'x_i) - y_i x_i s(-y_i w'x_i)
// accumulated into `out`. Zero exactly when y''_i == y_i.
inline void accumulate_point_term(std::span<const double> x, int y, int y_dd,
                                  double score, std::span<double> out) {
  if (y == y_dd) return;
  const double coef =
      y_dd * sigmoid_prob(score, -y_dd) - y * sigmoid_prob(score, -y);
  for (std::size_t j = 0; j < x.size(); ++j) out[j] += coef * x[j];
}

// Map step: sum of per-point summands over one shard, in the given order.
inline Vector map_shard(const Dataset& data, std::span<const std::size_t> shard,
                        const LabelTuple& most_violated,
                        std::span<const double> w) {
  detail::require_same_length("weight vector", data.dim(), w.size());
  detail::require_same_length("most violated tuple", data.size(),
                              most_violated.size());
  Vector out(data.dim(), 0.0);
  for (std::size_t i : shard) {
    if (i >= data.size()) throw DataError("shard index out of range");
    const auto x = data.features(i);
    accumulate_point_term(x, data.label(i), most_violated[i], dot(w, x), out);
  }
  return out;
}

// Reduce step: elementwise sum of the partials in shard order.
inline Vector reduce_shards(std::span<const Vector> partials) {
  if (partials.empty()) throw DataError("nothing to reduce");
  Vector out = partials.front();
  for (std::size_t j = 1; j < partials.size(); ++j) {
    detail::require_same_length("partial sum", out.size(), partials[j].size());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += partials[j][t];
  }
  return out;
}

// Unsharded data term, summed in index order.
inline Vector data_gradient(const Dataset& data, const LabelTuple& most_violated,
                            std::span<const double> w) {
  std::vector<std::size_t> all(data.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return map_shard(data, all, most_violated, w);
}

inline std::size_t default_workers() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Map over every shard (concurrently when workers > 1), then reduce in shard
// index order. The result depends only on the plan, never on scheduling.
inline Vector sharded_data_gradient(const Dataset& data,
                                    const LabelTuple& most_violated,
                                    std::span<const double> w,
                                    const ShardPlan& plan,
                                    std::size_t workers = 1) {
  if (plan.num_points() != data.size()) {
    throw ConfigError("shard plan covers " + std::to_string(plan.num_points()) +
                      " points, dataset has " + std::to_string(data.size()));
  }
  const auto shards = plan.members();
  std::vector<Vector> partials(shards.size());
  if (workers <= 1 || shards.size() == 1) {
    for (std::size_t j = 0; j < shards.size(); ++j) {
      partials[j] = map_shard(data, shards[j], most_violated, w);
    }
  } else {
    for (std::size_t start = 0; start < shards.size(); start += workers) {
      const std::size_t stop = std::min(shards.size(), start + workers);
      std::vector<std::future<Vector>> running;
      for (std::size_t j = start; j < stop; ++j) {
        running.push_back(std::async(std::launch::async, [&, j] {
          return map_shard(data, shards[j], most_violated, w);
        }));
      }
      for (std::size_t j = start; j < stop; ++j) {
        partials[j] = running[j - start].get();
      }
    }
  }
  return reduce_shards(partials);
}

}  // namespace smlm
