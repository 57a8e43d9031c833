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

#include <cstddef>
#include <string>

#include "smlm/common.hpp"
#include "smlm/data_model.hpp"
#include "smlm/types.hpp"

namespace smlm {

inline ContingencyCounts counts_from_tuples(const LabelTuple& truth,
                                            const LabelTuple& pred) {
  detail::require_same_length("predicted tuple", truth.size(), pred.size());
  ContingencyCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1) {
      ++c.n_pos;
      c.a += (pred[i] == 1);
    } else {
      ++c.n_neg;
      c.b += (pred[i] == 1);
    }
  }
  if (c.n_pos == 0 || c.n_neg == 0) {
    throw DataError("truth tuple must contain both classes");
  }
  return c;
}

inline void check_counts(const ContingencyCounts& c) {
  if (c.n_pos == 0 || c.n_neg == 0) {
    throw DataError("contingency counts need n_pos >= 1 and n_neg >= 1");
  }
  if (c.a > c.n_pos || c.b > c.n_neg) {
    throw DataError("contingency counts out of range: a=" +
                    std::to_string(c.a) + " b=" + std::to_string(c.b) +
                    " n_pos=" + std::to_string(c.n_pos) +
                    " n_neg=" + std::to_string(c.n_neg));
  }
}

namespace detail {

// Loss kernels without validation; callers guarantee the count invariants.
inline double fscore_loss(std::size_t a, std::size_t b, std::size_t n_pos) {
  if (a == 0) return 1.0;
  return 1.0 - 2.0 * static_cast<double>(a) /
                   static_cast<double>(a + b + n_pos);
}

// Pairs (positive, negative) ordered correctly count 1, tied pairs 1/2.
inline double auroc_loss(std::size_t a, std::size_t b, std::size_t n_pos,
                         std::size_t n_neg) {
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double fn = static_cast<double>(n_pos - a);
  const double tn = static_cast<double>(n_neg - b);
  const double auc = (ad * tn + 0.5 * (ad * bd + fn * tn)) /
                     (static_cast<double>(n_pos) * static_cast<double>(n_neg));
  return 1.0 - auc;
}

inline double prbep_loss(std::size_t a, std::size_t n_pos) {
  return 1.0 - static_cast<double>(a) / static_cast<double>(n_pos);
}

inline double delta_unchecked(LossKind kind, std::size_t a, std::size_t b,
                              std::size_t n_pos, std::size_t n_neg) {
  switch (kind) {
    case LossKind::kFScore:
      return fscore_loss(a, b, n_pos);
    case LossKind::kAuroc:
      return auroc_loss(a, b, n_pos, n_neg);
    case LossKind::kPrbep:
      return prbep_loss(a, n_pos);
  }
  return 1.0;
}

}  // namespace detail

// Complex loss in [0, 1]. PRBEP is only defined on the break-even surface
// a + b == n_pos, where precision and recall coincide.
inline double delta(LossKind kind, const ContingencyCounts& c) {
  check_counts(c);
  if (kind == LossKind::kPrbep && c.a + c.b != c.n_pos) {
    throw DataError("PRBEP loss requires a + b == n_pos (break-even point)");
  }
  return detail::delta_unchecked(kind, c.a, c.b, c.n_pos, c.n_neg);
}

inline double delta(LossKind kind, const LabelTuple& truth,
                    const LabelTuple& pred) {
  return delta(kind, counts_from_tuples(truth, pred));
}

}  // namespace smlm
