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
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/torus.hpp"

namespace ergolab {

struct TrigMode {
  std::int64_t j = 0;  // frequency in x
  std::int64_t k = 0;  // frequency in y
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

/// f(x, y) = sum a cos 2pi(jx + ky) + b sin 2pi(jx + ky), no constant term.
class TrigPolynomial {
 public:
  explicit TrigPolynomial(std::vector<TrigMode> modes) : modes_(std::move(modes)) {
    for (const auto& m : modes_) {
      if (m.j == 0 && m.k == 0) throw DomainError("trig polynomial cannot have a constant mode");
    }
  }

  const std::vector<TrigMode>& modes() const { return modes_; }

  std::int64_t max_frequency() const {
    std::int64_t f = 0;
    for (const auto& m : modes_)
      f = std::max({f, static_cast<std::int64_t>(detail::uabs(m.j)), static_cast<std::int64_t>(detail::uabs(m.k))});
    return f;
  }

  double operator()(const TorusPoint& p) const {
    double total = 0.0;
    for (const auto& m : modes_) {
      double theta = 2.0 * std::numbers::pi * phase(m, p).to_double();
      total += m.cos_amp * std::cos(theta) + m.sin_amp * std::sin(theta);
    }
    return total;
  }

  /// {jx + ky} computed in fixed point so the angle stays accurate.
  static FixedReal phase(const TrigMode& m, const TorusPoint& p) { return (p.x * m.j + p.y * m.k).frac(); }

 private:
  std::vector<TrigMode> modes_;
};

/// sigma(t) = integral_0^t f(x + s, y + gamma s) ds in closed form. Each mode
/// contributes (sin/cos difference) / (2 pi (j + k gamma)). Target absolute
/// error 1e-12 for moderate t.
inline double sigma_trig(const TorusWinding& w, const TrigPolynomial& f, const TorusPoint& p, double t) {
  if (t < 0.0) throw DomainError("flow time must be non-negative");
  if (t == 0.0) return 0.0;
  const FixedReal tf = FixedReal::from_double(t);
  const FixedReal gamma_t = w.slope() * tf;
  const double gamma = w.slope().to_double();
  double total = 0.0;
  for (const auto& m : f.modes()) {
    if (w.angle().is_rational() && m.j * w.angle().denominator() + m.k * w.angle().numerator() == 0)
      throw DomainError("resonant frequency");
    const double omega = static_cast<double>(m.j) + static_cast<double>(m.k) * gamma;
    const double two_pi = 2.0 * std::numbers::pi;
    const double a0 = two_pi * TrigPolynomial::phase(m, p).to_double();
    const FixedReal advance = tf * m.j + gamma_t * m.k;  // omega * t
    const double half = std::numbers::pi * advance.to_double();
    double dsin, dcos;
    if (std::abs(half) < 1.0) {
      // sin(a1) - sin(a0) = 2 cos(a0 + h) sin(h), h = (a1 - a0) / 2
      dsin = 2.0 * std::cos(a0 + half) * std::sin(half);
      dcos = -2.0 * std::sin(a0 + half) * std::sin(half);
    } else {
      const double a1 = two_pi * (TrigPolynomial::phase(m, p) + advance).frac().to_double();
      dsin = std::sin(a1) - std::sin(a0);
      dcos = std::cos(a1) - std::cos(a0);
    }
    const double denom = two_pi * omega;
    total += m.cos_amp * dsin / denom - m.sin_amp * dcos / denom;
  }
  return total;
}

}  // namespace ergolab
