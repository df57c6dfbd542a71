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
#include <type_traits>
#include <utility>
#include <vector>

#include "ergolab/circle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/maps.hpp"

namespace ergolab {

/// Piecewise-constant zero-mean observable on the circle. Integer values
/// drive cascades; FixedReal values are for flow bases.
template <class Value>
class StepCocycle {
 public:
  StepCocycle(Partition cells, std::vector<Value> values) : cells_(std::move(cells)), values_(std::move(values)) {
    if (values_.size() != cells_.size()) throw DomainError("cocycle needs one value per cell");
    BigInt mean = 0;
    for (std::size_t i = 0; i < cells_.size(); ++i) mean += BigInt(cells_.length(i).mantissa()) * raw(values_[i]);
    if (mean != 0) throw DomainError("cocycle must have zero mean");
  }

  /// The identically zero observable on two cells split at 1/2.
  static StepCocycle zero() { return StepCocycle(Partition({FixedReal{}, FixedReal::from_ratio(1, 2)}), {Value{}, Value{}}); }

  const Partition& cells() const { return cells_; }
  const std::vector<Value>& values() const { return values_; }

  const Value& operator()(const FixedReal& p) const { return values_[cells_.locate(p)]; }

 private:
  static BigInt raw(const Value& v) {
    if constexpr (std::is_same_v<Value, FixedReal>) return BigInt(v.mantissa());
    else return BigInt(v);
  }

  Partition cells_;
  std::vector<Value> values_;
};

using IntegerCocycle = StepCocycle<std::int64_t>;

/// The ±1 observable: +1 on [0, split), -1 on [split, 1). Zero mean needs split = 1/2.
inline IntegerCocycle plus_minus_step(const FixedReal& split = FixedReal::from_ratio(1, 2)) {
  return IntegerCocycle(Partition({FixedReal{}, split}), {1, -1});
}

template <class Value>
const Value& step_eval(const StepCocycle<Value>& f, const FixedReal& p) {
  return f(p);
}

/// Streams the Birkhoff sums S_n = sum_{i<n} f(S^i x), n = 1..N, calling
/// visit(n, S_n, S^n x). A visitor returning false stops the scan. Returns
/// the last visited point.
template <CircleMap Map, class Visitor>
FixedReal for_each_birkhoff(const Map& map, const IntegerCocycle& f, FixedReal x, std::int64_t n_max, Visitor&& visit) {
  if (n_max < 1) throw DomainError("scan length must be >= 1");
  std::int64_t sum = 0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    at_step(n - 1, [&] {
      if (__builtin_add_overflow(sum, f(x), &sum)) throw DomainError("Birkhoff sum overflow");
      x = map.apply(x);
      return 0;
    });
    if constexpr (std::is_same_v<std::invoke_result_t<Visitor, std::int64_t, std::int64_t, const FixedReal&>, bool>) {
      if (!visit(n, sum, std::as_const(x))) break;
    } else {
      visit(n, sum, std::as_const(x));
    }
  }
  return x;
}

template <CircleMap Map>
std::vector<std::int64_t> birkhoff_scan(const Map& map, const IntegerCocycle& f, const FixedReal& x, std::int64_t n_max) {
  std::vector<std::int64_t> sums;
  sums.reserve(static_cast<std::size_t>(n_max));
  for_each_birkhoff(map, f, x, n_max, [&](std::int64_t, std::int64_t s, const FixedReal&) { sums.push_back(s); });
  return sums;
}

}  // namespace ergolab
