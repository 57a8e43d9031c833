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
#include <stdexcept>
#include <string>
#include <vector>

namespace smlm {

using Vector = std::vector<double>;

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data: dimensions, labels, parse failures.
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter combinations (non-positive C, L, k < 2, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite values produced during optimization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string dims_message(const char* what, std::size_t expected,
                                std::size_t got) {
  return std::string(what) + ": expected length " + std::to_string(expected) +
         ", got " + std::to_string(got);
}

inline void require_same_length(const char* what, std::size_t expected,
                                std::size_t got) {
  if (expected != got) throw DataError(dims_message(what, expected, got));
}

}  // namespace detail
}  // namespace smlm
