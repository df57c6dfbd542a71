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

// Skew product R(x, y) = (Sx, T^{n(x)} y) over a zero-mean integer cocycle n.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ergolab/circle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/step_cocycle.hpp"

namespace ergolab {

struct ProductState {
  FixedReal x;
  FixedReal y;
  bool operator==(const ProductState&) const = default;
};

/// T^k y for any integer k; negative k uses the inverse.
template <InvertibleCircleMap Fiber>
FixedReal fiber_power(const Fiber& t, FixedReal y, std::int64_t k) {
  if constexpr (requires { t.apply_power(y, k); }) {
    return t.apply_power(y, k);
  } else {
    for (; k > 0; --k) y = t.apply(y);
    for (; k < 0; ++k) y = t.apply_inverse(y);
    return y;
  }
}

template <CircleMap Base, InvertibleCircleMap Fiber>
class SkewProduct {
 public:
  SkewProduct(Base base, Fiber fiber, IntegerCocycle exponent)
      : base_(std::move(base)), fiber_(std::move(fiber)), exponent_(std::move(exponent)) {}

  const Base& base() const { return base_; }
  const Fiber& fiber() const { return fiber_; }
  const IntegerCocycle& exponent() const { return exponent_; }

  ProductState step(const ProductState& s) const {
    return {base_.apply(s.x), fiber_power(fiber_, s.y, exponent_(s.x))};
  }

 private:
  Base base_;
  Fiber fiber_;
  IntegerCocycle exponent_;
};

template <CircleMap Base, InvertibleCircleMap Fiber>
ProductState skew_step(const SkewProduct<Base, Fiber>& r, const ProductState& s) {
  return r.step(s);
}

/// Half-open rectangle [x_lo, x_hi) x [y_lo, y_hi) of the unit square.
struct Rectangle {
  FixedReal x_lo;
  FixedReal x_hi;
  FixedReal y_lo;
  FixedReal y_hi;

  bool contains(const ProductState& s) const {
    auto in = [](const FixedReal& v, const FixedReal& lo, const FixedReal& hi) {
      Side a = side_of(v, lo), b = side_of(v, hi);
      if (a == Side::Ambiguous || b == Side::Ambiguous) throw PrecisionExhausted("point ambiguous against rectangle");
      return a == Side::AtOrAbove && b == Side::Below;
    };
    return in(s.x, x_lo, x_hi) && in(s.y, y_lo, y_hi);
  }
};

struct AverageEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // batch-means estimate
};

struct SkewOrbitStats {
  std::int64_t steps = 0;
  std::vector<AverageEstimate> averages;  // one per observable
  std::int64_t total_displacement = 0;    // sum of n(S^i x0), i < N
  ProductState final_state;
};

/// Birkhoff averages of rectangle indicators along the R-orbit of s0. The
/// standard error comes from `batches` contiguous batch means.
template <CircleMap Base, InvertibleCircleMap Fiber>
SkewOrbitStats skew_orbit_stats(const SkewProduct<Base, Fiber>& r, const ProductState& s0, std::int64_t n_steps,
                                const std::vector<Rectangle>& observables, std::int64_t batches = 50) {
  if (n_steps < 1) throw DomainError("N must be >= 1");
  batches = std::max<std::int64_t>(1, std::min(batches, n_steps));
  const std::int64_t batch_len = n_steps / batches;
  std::vector<std::int64_t> hits(observables.size(), 0), batch_hits(observables.size(), 0);
  std::vector<std::vector<double>> batch_means(observables.size());
  SkewOrbitStats out;
  ProductState s = s0;
  for (std::int64_t i = 0; i < n_steps; ++i) {
    at_step(i, [&] {
      for (std::size_t o = 0; o < observables.size(); ++o) {
        if (observables[o].contains(s)) {
          ++hits[o];
          ++batch_hits[o];
        }
      }
      const std::int64_t k = r.exponent()(s.x);
      out.total_displacement += k;
      s = {r.base().apply(s.x), fiber_power(r.fiber(), s.y, k)};
      return 0;
    });
    if ((i + 1) % batch_len == 0 && static_cast<std::int64_t>(batch_means.empty() ? 0 : batch_means[0].size()) < batches) {
      for (std::size_t o = 0; o < observables.size(); ++o) {
        batch_means[o].push_back(static_cast<double>(batch_hits[o]) / static_cast<double>(batch_len));
        batch_hits[o] = 0;
      }
    }
  }
  out.steps = n_steps;
  out.final_state = s;
  for (std::size_t o = 0; o < observables.size(); ++o) {
    AverageEstimate est;
    est.mean = static_cast<double>(hits[o]) / static_cast<double>(n_steps);
    const auto& bm = batch_means[o];
    if (bm.size() > 1) {
      double m = 0, v = 0;
      for (double b : bm) m += b;
      m /= static_cast<double>(bm.size());
      for (double b : bm) v += (b - m) * (b - m);
      v /= static_cast<double>(bm.size() - 1);
      est.std_error = std::sqrt(v / static_cast<double>(bm.size()));
    }
    out.averages.push_back(est);
  }
  return out;
}

}  // namespace ergolab
