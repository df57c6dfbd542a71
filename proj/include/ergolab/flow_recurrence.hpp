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

// Zeros of sigma(t, x) with simultaneous set-returns or near-returns, for
// special flows (exact, piecewise linear) and torus windings (bracketing).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "ergolab/circle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/phase_function.hpp"
#include "ergolab/return_record.hpp"
#include "ergolab/sigma.hpp"
#include "ergolab/special_flow.hpp"
#include "ergolab/torus.hpp"
#include "ergolab/trig_polynomial.hpp"

namespace ergolab {

/// Rectangle [a_lo, a_hi) x [h_lo, h_hi) of phase space; no h_hi means up to the roof.
struct PhaseRectangle {
  FixedReal a_lo;
  FixedReal a_hi;
  FixedReal h_lo;
  std::optional<FixedReal> h_hi;
};

class PhaseTargetSet {
 public:
  explicit PhaseTargetSet(std::vector<PhaseRectangle> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw DomainError("target set must have positive measure");
    for (const auto& r : parts_) {
      if (guarded_compare(r.a_lo, FixedReal{}) == Ordering::Less || guarded_compare(r.a_lo, r.a_hi) != Ordering::Less ||
          guarded_compare(r.a_hi, fixed_one()) == Ordering::Greater ||
          guarded_compare(r.h_lo, FixedReal{}) == Ordering::Less ||
          (r.h_hi && guarded_compare(r.h_lo, *r.h_hi) != Ordering::Less))
        throw DomainError("malformed target rectangle");
    }
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      for (std::size_t j = i + 1; j < parts_.size(); ++j) {
        const auto &p = parts_[i], &q = parts_[j];
        bool base = p.a_lo.mantissa() < q.a_hi.mantissa() && q.a_lo.mantissa() < p.a_hi.mantissa();
        bool height = (!q.h_hi || p.h_lo.mantissa() < q.h_hi->mantissa()) &&
                      (!p.h_hi || q.h_lo.mantissa() < p.h_hi->mantissa());
        if (base && height) throw DomainError("target rectangles overlap");
      }
    }
  }

  static PhaseTargetSet whole() { return PhaseTargetSet({{FixedReal{}, fixed_one(), FixedReal{}, std::nullopt}}); }

  /// Base interval [lo, hi) at every height.
  static PhaseTargetSet column(const FixedReal& lo, const FixedReal& hi) {
    return PhaseTargetSet({{lo, hi, FixedReal{}, std::nullopt}});
  }

  const std::vector<PhaseRectangle>& parts() const { return parts_; }

  bool contains(const FlowState& s) const {
    auto inside = [](const FixedReal& v, const FixedReal& lo, const FixedReal* hi) {
      Side a = side_of(v, lo);
      if (a == Side::Ambiguous) throw PrecisionExhausted("point ambiguous against target boundary");
      if (a == Side::Below) return false;
      if (!hi) return true;
      Side b = side_of(v, *hi);
      if (b == Side::Ambiguous) throw PrecisionExhausted("point ambiguous against target boundary");
      return b == Side::Below;
    };
    for (const auto& r : parts_) {
      if (inside(s.a, r.a_lo, &r.a_hi) && inside(s.b, r.h_lo, r.h_hi ? &*r.h_hi : nullptr)) return true;
    }
    return false;
  }

  /// Normalized invariant measure (area under the roof scaled to 1).
  FixedReal measure(const Roof& roof) const {
    auto lo_max = [](const FixedReal& a, const FixedReal& b) { return a.mantissa() >= b.mantissa() ? a : b; };
    auto hi_min = [](const FixedReal& a, const FixedReal& b) { return a.mantissa() <= b.mantissa() ? a : b; };
    FixedReal area;
    for (const auto& r : parts_) {
      for (std::size_t c = 0; c < roof.cells().size(); ++c) {
        FixedReal a0 = lo_max(r.a_lo, roof.cells().lower(c));
        FixedReal a1 = hi_min(r.a_hi, roof.cells().upper(c));
        if (a1.mantissa() <= a0.mantissa()) continue;
        FixedReal h1 = r.h_hi ? hi_min(*r.h_hi, roof.height(c)) : roof.height(c);
        if (h1.mantissa() <= r.h_lo.mantissa()) continue;
        area += (a1 - a0) * (h1 - r.h_lo);
      }
    }
    return area / roof.area();
  }

 private:
  std::vector<PhaseRectangle> parts_;
};

/// Every t in (0, T] with sigma(t, x) = 0, with T_t x. Nodes where sigma
/// vanishes are reported; the interior of a zero segment is not (a zero run
/// is represented by its nodes). Transversal zeros inside a segment are
/// solved exactly. Calls on_zero(t, state).
template <CircleMap Map, class OnZero>
void for_each_flow_zero(const SpecialFlow<Map>& flow, const PhaseFunction& f, const FlowState& x, const FixedReal& t_end,
                        OnZero&& on_zero) {
  FixedReal last_t, last_sigma;
  FlowState end = walk_flow(flow, f, x, t_end, [&](const FlowSegment& seg) {
    const FixedReal dt = seg.t1 - seg.t0;
    const FixedReal sigma1 = seg.sigma0 + seg.slope * dt;
    const int s0 = guarded_sign(seg.sigma0);
    const int s1 = guarded_sign(sigma1);
    if (s0 == 0 && guarded_sign(seg.t0) > 0) on_zero(seg.t0, seg.start);
    if (s0 * s1 < 0) {
      FixedReal offset = -seg.sigma0 / seg.slope;
      on_zero(seg.t0 + offset, FlowState{seg.start.a, seg.start.b + offset});
    }
    last_t = seg.t1;
    last_sigma = sigma1;
  });
  if (guarded_sign(last_t) > 0 && guarded_sign(last_sigma) == 0) on_zero(last_t, end);
}

namespace detail {

inline void require_nonzero_start(const PhaseFunction& f, const FlowState& x) {
  if (guarded_sign(f(x)) == 0) throw DomainError("observable vanishes at the start point");
}

}  // namespace detail

/// Zeros of sigma up to T at which the orbit is in A. The start need not lie in A.
template <CircleMap Map>
std::vector<ReturnRecord> flow_zero_set_returns(const SpecialFlow<Map>& flow, const PhaseFunction& f,
                                                const FlowState& x, const FixedReal& t_end, const PhaseTargetSet& target) {
  if (guarded_compare(t_end, FixedReal{}) != Ordering::Greater) throw DomainError("T must be positive");
  detail::require_nonzero_start(f, x);
  std::vector<ReturnRecord> out;
  for_each_flow_zero(flow, f, x, t_end, [&](const FixedReal& t, const FlowState& s) {
    if (target.contains(s)) out.push_back({t, FixedReal{}, flow.distance(s, x), true});
  });
  return out;
}

/// Zeros of sigma up to T at which T_t x is within eps of x (product chart).
template <CircleMap Map>
std::vector<ReturnRecord> flow_zero_near_returns(const SpecialFlow<Map>& flow, const PhaseFunction& f,
                                                 const FlowState& x, const FixedReal& t_end, const FixedReal& eps) {
  if (guarded_compare(t_end, FixedReal{}) != Ordering::Greater) throw DomainError("T must be positive");
  if (guarded_compare(eps, FixedReal{}) != Ordering::Greater) throw DomainError("eps must be positive");
  detail::require_nonzero_start(f, x);
  std::vector<ReturnRecord> out;
  for_each_flow_zero(flow, f, x, t_end, [&](const FixedReal& t, const FlowState& s) {
    FixedReal d = flow.distance(s, x);
    if (detail::within(d, eps)) out.push_back({t, FixedReal{}, d, std::nullopt});
  });
  return out;
}

struct WindingScanOptions {
  double grid_step = 0.0;   // 0: 1 / (8 * max frequency * (1 + |gamma|))
  double tolerance = 1e-12; // bracket width at which bisection stops
};

inline double default_grid_step(const TorusWinding& w, const TrigPolynomial& f) {
  return 1.0 / (8.0 * static_cast<double>(std::max<std::int64_t>(1, f.max_frequency())) *
                (1.0 + std::abs(w.slope().to_double())));
}

/// Zeros of sigma_trig up to T by sign-change bracketing on a grid and
/// bisection, kept when both torus coordinates return within eps. Tangential
/// zeros (no sign change) are not detected. A root within `tolerance` past T
/// is reported at T.
inline std::vector<ReturnRecord> flow_zero_near_returns(const TorusWinding& w, const TrigPolynomial& f,
                                                        const TorusPoint& p, double t_end, const FixedReal& eps,
                                                        WindingScanOptions opts = {}) {
  if (!(t_end > 0.0)) throw DomainError("T must be positive");
  if (guarded_compare(eps, FixedReal{}) != Ordering::Greater) throw DomainError("eps must be positive");
  const double f0 = f(p);
  if (std::abs(f0) <= 1e-12) throw DomainError("observable vanishes at the start point");
  const double h = opts.grid_step > 0.0 ? opts.grid_step : default_grid_step(w, f);
  auto sigma = [&](double t) { return sigma_trig(w, f, p, t); };
  auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };

  std::vector<ReturnRecord> out;
  auto report = [&](double t) {
    if (t > t_end) {
      if (t - t_end > opts.tolerance) return;
      t = t_end;
    }
    const FixedReal tf = FixedReal::from_double(t);
    const double value = sigma(t);
    FixedReal d = torus_distance(w.flow(p, tf), p);
    if (detail::within(d, eps)) out.push_back({tf, FixedReal::from_double(value), d, std::nullopt});
  };

  double prev_t = 0.0;
  int prev_sign = sign(f0);
  const auto steps = static_cast<std::int64_t>(std::ceil(t_end / h)) + 1;
  for (std::int64_t i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) * h;
    const double v = sigma(t);
    const int s = sign(v);
    if (s == 0) {
      report(t);
    } else if (prev_sign != 0 && s != prev_sign) {
      // The bracket's left sign is known even at t = 0, where sigma itself vanishes.
      double lo = prev_t, hi = t;
      while (hi - lo > opts.tolerance) {
        const double mid = 0.5 * (lo + hi);
        const int sm = sign(sigma(mid));
        if (sm == 0) {
          lo = hi = mid;
        } else if (sm == prev_sign) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      report(0.5 * (lo + hi));
    }
    prev_t = t;
    prev_sign = s;
    if (t > t_end + opts.tolerance) break;
  }
  return out;
}

}  // namespace ergolab
