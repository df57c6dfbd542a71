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

// Special flow under a piecewise-constant roof: points move upward at unit
// speed and (a, r(a)) is glued to (P(a), 0).

#include <cstdint>
#include <utility>
#include <vector>

#include "ergolab/circle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/maps.hpp"

namespace ergolab {

class Roof {
 public:
  Roof(Partition cells, std::vector<FixedReal> heights) : cells_(std::move(cells)), heights_(std::move(heights)) {
    if (heights_.size() != cells_.size()) throw DomainError("roof needs one height per cell");
    for (const auto& h : heights_) {
      if (guarded_compare(h, FixedReal{}) != Ordering::Greater) throw DomainError("roof heights must be positive");
    }
  }

  static Roof constant(const FixedReal& h) { return Roof(Partition{}, {h}); }

  const Partition& cells() const { return cells_; }
  const std::vector<FixedReal>& heights() const { return heights_; }
  const FixedReal& height(std::size_t cell) const { return heights_[cell]; }
  const FixedReal& height_at(const FixedReal& a) const { return heights_[cells_.locate(a)]; }

  /// Area under the roof (the normalizing mass of the invariant measure).
  FixedReal area() const {
    FixedReal total;
    for (std::size_t i = 0; i < cells_.size(); ++i) total += cells_.length(i) * heights_[i];
    return total;
  }

  const FixedReal& max_height() const {
    return *std::max_element(heights_.begin(), heights_.end(),
                             [](const FixedReal& a, const FixedReal& b) { return a.mantissa() < b.mantissa(); });
  }

 private:
  Partition cells_;
  std::vector<FixedReal> heights_;
};

struct FlowState {
  FixedReal a;  // base coordinate
  FixedReal b;  // height under the roof
  bool operator==(const FlowState&) const = default;
};

struct FlowStepResult {
  FlowState state;
  std::int64_t crossings = 0;
};

inline constexpr std::int64_t kDefaultMaxCrossings = 50'000'000;

template <CircleMap Map>
class SpecialFlow {
 public:
  SpecialFlow(Roof roof, Map base, std::int64_t max_crossings = kDefaultMaxCrossings)
      : roof_(std::move(roof)), base_(std::move(base)), max_crossings_(max_crossings) {}

  const Roof& roof() const { return roof_; }
  const Map& base() const { return base_; }
  std::int64_t max_crossings() const { return max_crossings_; }

  void validate(const FlowState& s) const {
    if (guarded_compare(s.b, FixedReal{}) == Ordering::Less ||
        side_of(s.b, roof_.height_at(s.a)) != Side::Below)
      throw DomainError("state must satisfy 0 <= b < r(a)");
  }

  /// Flows `t` units upward. Reaching the roof exactly applies the gluing.
  FlowStepResult step(FlowState s, const FixedReal& t) const {
    if (guarded_compare(t, FixedReal{}) == Ordering::Less) throw DomainError("flow time must be non-negative");
    validate(s);
    FixedReal remaining = t;
    std::int64_t crossings = 0;
    while (true) {
      FixedReal to_top = roof_.height_at(s.a) - s.b;
      Side side = side_of(remaining, to_top);
      if (side == Side::Below) {
        s.b += remaining;
        return {std::move(s), crossings};
      }
      if (side == Side::Ambiguous) {
        PrecisionExhausted e("roof crossing undecidable");
        e.step = crossings;
        throw e;
      }
      remaining -= to_top;
      s.a = at_step(crossings, [&] { return base_.apply(s.a); });
      s.b = FixedReal{};
      if (++crossings > max_crossings_) throw BudgetExceeded("crossing budget exceeded");
    }
  }

  /// Product-chart metric max(circle distance of bases, |height difference|).
  FixedReal distance(const FlowState& u, const FlowState& v) const {
    FixedReal da = circle_distance(u.a, v.a);
    FixedReal db = (u.b - v.b).abs();
    return da.mantissa() >= db.mantissa() ? da : db;
  }

 private:
  Roof roof_;
  Map base_;
  std::int64_t max_crossings_;
};

template <CircleMap Map>
FlowStepResult special_flow_step(const SpecialFlow<Map>& flow, const FlowState& s, const FixedReal& t) {
  return flow.step(s, t);
}

}  // namespace ergolab
