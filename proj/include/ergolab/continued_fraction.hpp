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

#include <cstddef>
#include <vector>

#include "ergolab/angle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"

namespace ergolab {

struct Convergent {
  BigInt p;
  BigInt q;
  bool operator==(const Convergent&) const = default;
};

/// Continued fraction [a0; a1, a2, ...] of a FixedReal. Only partial quotients
/// shared by every real in the error interval are emitted, so the expansion is
/// rigorous and its length is the precision-supported depth.
class ContinuedFraction {
 public:
  static ContinuedFraction expand(const FixedReal& x) {
    ContinuedFraction cf;
    BigInt lo_num = BigInt(x.lower()), hi_num = BigInt(x.upper());
    BigInt lo_den = BigInt(kUnit), hi_den = BigInt(kUnit);
    while (true) {
      BigInt a_lo = floor_div(lo_num, lo_den);
      BigInt a_hi = floor_div(hi_num, hi_den);
      if (a_lo != a_hi) break;
      cf.quotients_.push_back(a_lo);
      BigInt r_lo = lo_num - a_lo * lo_den;
      BigInt r_hi = hi_num - a_hi * hi_den;
      if (r_lo == 0 || r_hi == 0) break;
      // x -> 1/(x - a) reverses the interval.
      BigInt n_lo = hi_den, d_lo = r_hi;
      BigInt n_hi = lo_den, d_hi = r_lo;
      lo_num = std::move(n_lo);
      lo_den = std::move(d_lo);
      hi_num = std::move(n_hi);
      hi_den = std::move(d_hi);
    }
    BigInt p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
    for (const BigInt& a : cf.quotients_) {
      BigInt p = a * p_prev + p_prev2;
      BigInt q = a * q_prev + q_prev2;
      cf.convergents_.push_back({p, q});
      p_prev2 = std::move(p_prev);
      p_prev = std::move(p);
      q_prev2 = std::move(q_prev);
      q_prev = std::move(q);
    }
    return cf;
  }

  /// a0, a1, ... (a0 = 0 for values in [0,1)).
  const std::vector<BigInt>& partial_quotients() const { return quotients_; }
  const std::vector<Convergent>& convergents() const { return convergents_; }
  std::size_t depth() const { return quotients_.size(); }

 private:
  static BigInt floor_div(const BigInt& n, const BigInt& d) {
    BigInt q, r;
    mp::divide_qr(n, d, q, r);
    if (r != 0 && ((r < 0) != (d < 0))) --q;
    return q;
  }

  std::vector<BigInt> quotients_;
  std::vector<Convergent> convergents_;
};

/// First k convergents p_i/q_i of the rotation angle (starting with a0/1).
inline std::vector<Convergent> cf_convergents(const AngleSpec& alpha, std::size_t k) {
  if (alpha.is_rational()) throw DomainError("continued fraction terminates");
  if (k < 1) throw DomainError("need at least one convergent");
  auto cf = ContinuedFraction::expand(alpha.resolved());
  if (cf.depth() < k) throw PrecisionExhausted("continued fraction deeper than " + std::to_string(cf.depth()));
  auto all = cf.convergents();
  all.resize(k);
  return all;
}

}  // namespace ergolab
