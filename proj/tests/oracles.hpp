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

// Independent reference computations for tests. None of these route through
// the library's partition lookup, orbit stepping or profile walking.

#include <cstdint>
#include <numeric>
#include <vector>

#include "ergolab/fixed_real.hpp"
#include "ergolab/phase_function.hpp"
#include "ergolab/special_flow.hpp"

namespace ergolab::oracle {

/// An exact rational in [0,1) as num/den with den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

inline bool less(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

inline FixedReal to_fixed(const Rational& r) { return FixedReal::from_ratio(r.num, r.den); }

/// A step cocycle on rational breakpoints (first breakpoint 0).
struct RationalStep {
  std::vector<Rational> cuts;
  std::vector<std::int64_t> values;

  std::int64_t operator()(const Rational& x) const {
    std::size_t cell = 0;
    for (std::size_t i = 1; i < cuts.size(); ++i)
      if (!less(x, cuts[i])) cell = i;
    return values[cell];
  }

  bool zero_mean() const {
    // Sum of length * value over a common denominator.
    std::int64_t den = 1;
    for (const auto& c : cuts) den = std::lcm(den, c.den);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      std::int64_t lo = cuts[i].num * (den / cuts[i].den);
      std::int64_t hi = i + 1 < cuts.size() ? cuts[i + 1].num * (den / cuts[i + 1].den) : den;
      total += (hi - lo) * values[i];
    }
    return total == 0;
  }
};

/// The orbit x, x + p/q, ... of a rational rotation tabulated exactly over one period.
class RotationTable {
 public:
  RotationTable(std::int64_t p, std::int64_t q, Rational x) {
    den_ = std::lcm(q, x.den);
    const std::int64_t step = p * (den_ / q);
    std::int64_t cur = x.num * (den_ / x.den);
    for (std::int64_t i = 0; i < q; ++i) {
      nums_.push_back(cur);
      cur = (cur + step) % den_;
    }
  }

  std::size_t period() const { return nums_.size(); }
  Rational at(std::int64_t n) const { return {nums_[static_cast<std::size_t>(n) % nums_.size()], den_}; }

  /// Circle distance between the n-th point and the start, scaled by den.
  std::int64_t scaled_distance(std::int64_t n) const {
    std::int64_t d = std::abs(at(n).num - nums_[0]);
    return std::min(d, den_ - d);
  }
  std::int64_t den() const { return den_; }

  std::vector<std::int64_t> sums(const RationalStep& f, std::int64_t n_max) const {
    std::vector<std::int64_t> out;
    std::int64_t s = 0;
    for (std::int64_t n = 0; n < n_max; ++n) {
      s += f(at(n));
      out.push_back(s);
    }
    return out;
  }

 private:
  std::int64_t den_ = 1;
  std::vector<std::int64_t> nums_;
};

/// Integral of s -> f(T_s x) over [0, t] by sampling the flow. On pieces
/// shorter than every band and roof height the integrand has at most one
/// jump; such pieces are bisected until the jump is pinned within `resolution`.
template <class Flow>
double sigma_quadrature(const Flow& flow, const PhaseFunction& f, const FlowState& x, double t,
                        double resolution = 1e-14) {
  double thinnest = 1e300;
  const auto& roof = flow.roof();
  for (std::size_t c = 0; c < f.cells().size(); ++c) {
    double below = 0.0;
    const auto& col = f.columns()[c];
    double top = roof.height_at(f.cells().lower(c)).to_double();
    for (std::size_t j = 0; j <= col.band_cuts.size(); ++j) {
      double upper = j < col.band_cuts.size() ? col.band_cuts[j].to_double() : top;
      thinnest = std::min(thinnest, upper - below);
      below = upper;
    }
  }
  auto value_at = [&](double s) {
    FlowState y = flow.step(x, FixedReal::from_double(s)).state;
    return f(y).to_double();
  };
  const double h = thinnest / 2.0;
  double total = 0.0;
  double a = 0.0;
  double fa = value_at(0.0);
  while (a < t) {
    double b = std::min(t, a + h);
    // Value just before b: sample slightly inside the piece.
    double fb = value_at(std::max(a, b - resolution));
    if (fa == fb) {
      total += fa * (b - a);
    } else {
      double lo = a, hi = b - resolution;
      while (hi - lo > resolution) {
        double mid = 0.5 * (lo + hi);
        if (value_at(mid) == fa) lo = mid;
        else hi = mid;
      }
      total += fa * (lo - a) + fb * (b - lo);
    }
    a = b;
    if (a < t) fa = value_at(a);
  }
  return total;
}

}  // namespace ergolab::oracle
