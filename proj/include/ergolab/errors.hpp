// Copyright 2026 The ergolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ergolab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An error interval straddles a decision boundary, or accumulated error
/// exceeded the configured margin. Never silently resolved.
class PrecisionExhausted : public Error {
 public:
  explicit PrecisionExhausted(const std::string& detail = {})
      : Error(detail.empty() ? "precision exhausted" : "precision exhausted: " + detail) {}

  /// Orbit step (or crossing index) at which the failure happened, if known.
  std::optional<std::int64_t> step;
};

/// A bounded search ran out of budget: crossing loops, first-return scans.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Inputs violate a mathematical precondition (non-zero mean, rational
/// continued fraction, resonant mode, observable vanishing at start, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Attaches a step index to a precision failure raised inside an orbit loop.
template <class Fn>
decltype(auto) at_step(std::int64_t step, Fn&& fn) {
  try {
    return fn();
  } catch (PrecisionExhausted& e) {
    if (!e.step) e.step = step;
    throw;
  }
}

}  // namespace ergolab
