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

#include "ergolab/angle.hpp"
#include "ergolab/circle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"

namespace ergolab {

struct TorusPoint {
  FixedReal x;
  FixedReal y;
  bool operator==(const TorusPoint&) const = default;
};

/// Linear flow (x, y) -> ({x + t}, {y + gamma t}) on the 2-torus.
class TorusWinding {
 public:
  explicit TorusWinding(AngleSpec gamma) : gamma_(std::move(gamma)) {}

  const AngleSpec& angle() const { return gamma_; }
  const FixedReal& slope() const { return gamma_.value(); }
  bool is_ergodic() const { return !gamma_.is_rational(); }

  TorusPoint flow(const TorusPoint& p, const FixedReal& t) const {
    if (guarded_compare(t, FixedReal{}) == Ordering::Less) throw DomainError("flow time must be non-negative");
    TorusPoint r{(p.x + t).frac(), (p.y + slope() * t).frac()};
    require_margin(r.x);
    require_margin(r.y);
    return r;
  }

 private:
  AngleSpec gamma_;
};

inline TorusPoint torus_flow(const TorusWinding& w, const TorusPoint& p, const FixedReal& t) { return w.flow(p, t); }

/// Max of the two circle distances.
inline FixedReal torus_distance(const TorusPoint& a, const TorusPoint& b) {
  FixedReal dx = circle_distance(a.x, b.x);
  FixedReal dy = circle_distance(a.y, b.y);
  return dx.mantissa() >= dy.mantissa() ? dx : dy;
}

}  // namespace ergolab
