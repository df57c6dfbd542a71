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

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"

namespace ergolab {

// Points of the circle R/Z are FixedReals with mantissa in [0, U).

inline FixedReal circle_add(const FixedReal& p, const FixedReal& step) {
  FixedReal r = p + step;
  if (r.mantissa() >= kUnit) r -= fixed_one();
  else if (r.mantissa() < 0) r += fixed_one();
  return r;
}

inline FixedReal circle_sub(const FixedReal& p, const FixedReal& step) {
  return circle_add(p, FixedReal::from_raw(-step.mantissa(), step.err_ulps()));
}

/// min(|a-b|, 1-|a-b|) for a, b on the circle.
inline FixedReal circle_distance(const FixedReal& a, const FixedReal& b) {
  FixedReal d = (a - b).frac();
  FixedReal other = fixed_one() - d;
  return d.mantissa() <= other.mantissa() ? d : other;
}

namespace detail {

inline bool within(const FixedReal& d, const FixedReal& eps) {
  switch (guarded_compare(d, eps)) {
    case Ordering::Less: return true;
    case Ordering::Greater:
    case Ordering::Equal: return false;
    default: throw PrecisionExhausted("distance ambiguous against eps");
  }
}

}  // namespace detail

/// {x0 + n*alpha}. Error is n*err(alpha) + err(x0); beyond `margin` the
/// point is considered lost.
inline FixedReal frac_orbit_point(const FixedReal& alpha, std::int64_t n, const FixedReal& x0,
                                  std::uint64_t margin = kDefaultErrMargin) {
  if (n < 0) throw DomainError("orbit index must be non-negative");
  FixedReal r = (x0 + alpha * n).frac();
  require_margin(r, margin);
  return r;
}

/// Ordered breakpoints 0 = b0 < b1 < ... < b_{m-1} < 1 splitting the circle
/// into half-open cells [b_i, b_{i+1}).
class Partition {
 public:
  Partition() : breakpoints_{FixedReal{}} {}

  explicit Partition(std::vector<FixedReal> breakpoints) : breakpoints_(std::move(breakpoints)) {
    if (breakpoints_.empty() || !(breakpoints_.front() == FixedReal{}))
      throw DomainError("partition must start with an exact 0");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
      if (guarded_compare(breakpoints_[i - 1], breakpoints_[i]) != Ordering::Less)
        throw DomainError("breakpoints must be strictly increasing");
    }
    if (guarded_compare(breakpoints_.back(), fixed_one()) != Ordering::Less)
      throw DomainError("breakpoints must lie in [0,1)");
  }

  std::size_t size() const { return breakpoints_.size(); }
  const std::vector<FixedReal>& breakpoints() const { return breakpoints_; }
  const FixedReal& lower(std::size_t cell) const { return breakpoints_[cell]; }
  FixedReal upper(std::size_t cell) const {
    return cell + 1 < breakpoints_.size() ? breakpoints_[cell + 1] : fixed_one();
  }
  FixedReal length(std::size_t cell) const { return upper(cell) - lower(cell); }

  /// Index of the cell containing p; throws when p's error interval touches
  /// a boundary it cannot be placed against.
  std::size_t locate(const FixedReal& p) const {
    if (p.lower() < 0 || p.upper() >= kUnit) throw PrecisionExhausted("point straddles the circle origin");
    std::size_t lo = 0, hi = breakpoints_.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      switch (side_of(p, breakpoints_[mid])) {
        case Side::AtOrAbove: lo = mid; break;
        case Side::Below: hi = mid; break;
        default: throw PrecisionExhausted("point ambiguous against a breakpoint");
      }
    }
    return lo;
  }

 private:
  std::vector<FixedReal> breakpoints_;
};

struct Interval {
  FixedReal lo;
  FixedReal hi;
};

/// Finite union of disjoint half-open intervals [lo, hi) in [0,1].
class IntervalSet {
 public:
  IntervalSet() = default;

  explicit IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {
    std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
      return a.lo.mantissa() < b.lo.mantissa();
    });
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const auto& iv = parts_[i];
      if (guarded_compare(iv.lo, FixedReal{}) == Ordering::Less || guarded_compare(iv.lo, iv.hi) != Ordering::Less ||
          guarded_compare(iv.hi, fixed_one()) == Ordering::Greater)
        throw DomainError("target interval must satisfy 0 <= lo < hi <= 1");
      if (i > 0) {
        auto c = guarded_compare(parts_[i - 1].hi, iv.lo);
        if (c != Ordering::Less && c != Ordering::Equal) throw DomainError("target intervals overlap");
      }
      measure_ += iv.hi - iv.lo;
    }
    if (parts_.empty()) throw DomainError("target set must have positive measure");
  }

  static IntervalSet whole() { return IntervalSet({{FixedReal{}, fixed_one()}}); }

  const std::vector<Interval>& parts() const { return parts_; }
  const FixedReal& measure() const { return measure_; }

  bool contains(const FixedReal& p) const {
    for (const auto& iv : parts_) {
      Side s = side_of(p, iv.lo);
      if (s == Side::Below) continue;
      if (s == Side::Ambiguous) throw PrecisionExhausted("point ambiguous against target boundary");
      switch (side_of(p, iv.hi)) {
        case Side::Below: return true;
        case Side::AtOrAbove: continue;
        default: throw PrecisionExhausted("point ambiguous against target boundary");
      }
    }
    return false;
  }

 private:
  std::vector<Interval> parts_;
  FixedReal measure_;
};

}  // namespace ergolab
