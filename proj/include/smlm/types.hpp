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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "smlm/common.hpp"

namespace smlm {

enum class LossKind : std::uint8_t { kFScore, kAuroc, kPrbep };

inline std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kFScore:
      return "fscore";
    case LossKind::kAuroc:
      return "auroc";
    case LossKind::kPrbep:
      return "prbep";
  }
  return "unknown";
}

inline std::optional<LossKind> parse_loss_kind(std::string_view name) {
  if (name == "fscore") return LossKind::kFScore;
  if (name == "auroc") return LossKind::kAuroc;
  if (name == "prbep") return LossKind::kPrbep;
  return std::nullopt;
}

// Confusion counts of a predicted tuple against the truth.
//   a     = TP (true positives predicted +1)
//   b     = FP (true negatives predicted +1)
//   n_pos = TP + FN, n_neg = FP + TN
struct ContingencyCounts {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;

  std::size_t tp() const { return a; }
  std::size_t fp() const { return b; }
  std::size_t fn() const { return n_pos - a; }
  std::size_t tn() const { return n_neg - b; }

  friend bool operator==(const ContingencyCounts&,
                         const ContingencyCounts&) = default;
};

}  // namespace smlm
