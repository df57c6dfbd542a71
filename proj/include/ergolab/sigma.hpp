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

// Orbit integrals sigma(t, x) = int_0^t f(T_s x) ds along a special flow.
// With rectangle-constant f the integral is piecewise linear; segments end
// exactly where the orbit crosses a band cut or the roof.

#include <cstdint>
#include <ostream>
#include <type_traits>
#include <utility>
#include <vector>

#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/phase_function.hpp"
#include "ergolab/special_flow.hpp"

namespace ergolab {

struct FlowSegment {
  FixedReal t0;
  FixedReal t1;
  FixedReal sigma0;
  FixedReal slope;
  FlowState start;  // T_{t0} x
};

/// Walks the orbit of x for t_max units, calling visit(segment) for each
/// linear piece of sigma. A visitor returning false stops the walk. Returns
/// T_{t_end} x (glued if t_end hits the roof exactly).
template <CircleMap Map, class Visitor>
FlowState walk_flow(const SpecialFlow<Map>& flow, const PhaseFunction& f, FlowState x, const FixedReal& t_max,
                    Visitor&& visit) {
  if (guarded_compare(t_max, FixedReal{}) == Ordering::Less) throw DomainError("duration must be non-negative");
  flow.validate(x);
  FixedReal t, sigma;
  std::int64_t crossings = 0;
  while (true) {
    FixedReal remaining = t_max - t;
    Ordering left = guarded_compare(remaining, FixedReal{});
    if (left == Ordering::Equal || left == Ordering::Less) break;
    auto fail = [&](const char* what) {
      PrecisionExhausted e(what);
      e.step = crossings;
      return e;
    };
    if (left == Ordering::Ambiguous) throw fail("segment end undecidable");
    auto piece = f.locate(x);
    FixedReal to_top = *piece.top - x.b;
    FlowSegment seg{t, t, sigma, *piece.value, x};
    Side side = side_of(remaining, to_top);
    if (side == Side::Ambiguous) throw fail("band crossing undecidable");
    const bool last = side == Side::Below;
    const FixedReal& dt = last ? remaining : to_top;
    seg.t1 = last ? t_max : t + dt;
    sigma += seg.slope * dt;
    t = seg.t1;
    if (last) {
      x.b += dt;
    } else if (piece.last_band) {
      x.a = at_step(crossings, [&] { return flow.base().apply(x.a); });
      x.b = FixedReal{};
      if (++crossings > flow.max_crossings()) throw BudgetExceeded("crossing budget exceeded");
    } else {
      x.b = *piece.top;
    }
    if constexpr (std::is_same_v<std::invoke_result_t<Visitor, const FlowSegment&>, bool>) {
      if (!visit(std::as_const(seg))) break;
    } else {
      visit(std::as_const(seg));
    }
    if (last) break;
  }
  return x;
}

/// Exact piecewise-linear graph of t -> sigma(t, x).
class SigmaProfile {
 public:
  struct Node {
    FixedReal t;
    FixedReal sigma;
  };

  SigmaProfile() : nodes_{{FixedReal{}, FixedReal{}}} {}

  void append(const FlowSegment& seg) {
    slopes_.push_back(seg.slope);
    nodes_.push_back({seg.t1, seg.sigma0 + seg.slope * (seg.t1 - seg.t0)});
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  /// slopes()[i] is the slope between nodes i and i+1.
  const std::vector<FixedReal>& slopes() const { return slopes_; }

  FixedReal eval(const FixedReal& t) const {
    if (guarded_compare(t, FixedReal{}) == Ordering::Less || guarded_compare(t, nodes_.back().t) == Ordering::Greater)
      throw DomainError("time outside the profile");
    // Last node with node.t <= t.
    std::size_t lo = 0, hi = nodes_.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (side_of(t, nodes_[mid].t) == Side::Below) hi = mid;
      else lo = mid;
    }
    if (lo + 1 == nodes_.size()) return nodes_.back().sigma;
    return nodes_[lo].sigma + slopes_[lo] * (t - nodes_[lo].t);
  }

  /// Two-column CSV: t,sigma.
  void write_csv(std::ostream& os, int digits = 20) const {
    os << "t,sigma\n";
    for (const auto& n : nodes_) os << n.t.to_decimal(digits) << ',' << n.sigma.to_decimal(digits) << '\n';
  }

 private:
  std::vector<Node> nodes_;
  std::vector<FixedReal> slopes_;
};

template <CircleMap Map>
SigmaProfile sigma_profile(const SpecialFlow<Map>& flow, const PhaseFunction& f, const FlowState& x,
                           const FixedReal& t_max) {
  if (guarded_compare(t_max, FixedReal{}) != Ordering::Greater) throw DomainError("t_max must be positive");
  SigmaProfile profile;
  walk_flow(flow, f, x, t_max, [&](const FlowSegment& seg) { profile.append(seg); });
  return profile;
}

template <CircleMap Map>
FixedReal sigma_eval(const SpecialFlow<Map>& flow, const PhaseFunction& f, const FlowState& x, const FixedReal& t) {
  FixedReal sigma;
  walk_flow(flow, f, x, t, [&](const FlowSegment& seg) { sigma = seg.sigma0 + seg.slope * (seg.t1 - seg.t0); });
  return sigma;
}

}  // namespace ergolab
