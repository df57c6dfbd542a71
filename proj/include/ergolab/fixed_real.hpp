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

// Fixed-point reals with an additive error bound.
//
// A FixedReal stores an integer mantissa m and an error bound e (both in
// units of last place). The represented real lies in [m - e, m + e] / U where
// U = 720720 * 2^192. The cofactor 720720 = lcm(1..16) makes every rational
// with denominator <= 16 (and decimal fractions such as 0.1 or 0.05) exact,
// so periodic oracle orbits land on breakpoints without error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "ergolab/errors.hpp"

namespace ergolab {

namespace mp = boost::multiprecision;

using Mantissa = mp::number<mp::cpp_int_backend<256, 256, mp::signed_magnitude, mp::checked, void>>;
using WideInt = mp::number<mp::cpp_int_backend<576, 576, mp::signed_magnitude, mp::checked, void>>;
using BigInt = mp::cpp_int;

inline constexpr int kScaleBits = 192;
inline constexpr std::uint32_t kRadixCofactor = 720720;  // lcm(1..16)

// Errors beyond this many ulps abort the computation (leaves > 160 bits).
inline constexpr std::uint64_t kDefaultErrMargin = std::uint64_t{1} << 48;

inline const Mantissa kUnit = Mantissa(kRadixCofactor) << kScaleBits;
inline const double kUnitAsDouble = std::ldexp(static_cast<double>(kRadixCofactor), kScaleBits);

namespace detail {

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  return __builtin_add_overflow(a, b, &r) ? std::numeric_limits<std::uint64_t>::max() : r;
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  return __builtin_mul_overflow(a, b, &r) ? std::numeric_limits<std::uint64_t>::max() : r;
}

inline std::uint64_t uabs(std::int64_t k) {
  return k < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(k);
}

// Nearest-integer quotient (ties away from zero); `exact` reports a zero remainder.
template <class Int>
Int round_div(const Int& num, const Int& den, bool& exact) {
  Int q, r;
  mp::divide_qr(num, den, q, r);
  exact = r == 0;
  if (!exact) {
    Int twice = abs(r) * 2;
    Int aden = abs(den);
    if (twice >= aden) {
      if ((num < 0) != (den < 0)) --q; else ++q;
    }
  }
  return q;
}

template <class Int>
Int ceil_div_nonneg(const Int& num, const Int& den) {
  Int q, r;
  mp::divide_qr(num, den, q, r);
  if (r != 0) ++q;
  return q;
}

template <class Int>
std::uint64_t saturate_u64(const Int& v) {
  if (v > Int(std::numeric_limits<std::uint64_t>::max())) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(v);
}

template <class To, class From>
To narrow_int(const From& v) {
  To out;
  try {
    out = static_cast<To>(v);
  } catch (const std::overflow_error&) {
    throw PrecisionExhausted("fixed-point range exceeded");
  }
  return out;
}

}  // namespace detail

class FixedReal {
 public:
  FixedReal() = default;

  static FixedReal from_raw(Mantissa mantissa, std::uint64_t err_ulps = 0) {
    FixedReal r;
    r.m_ = std::move(mantissa);
    r.err_ = err_ulps;
    return r;
  }

  static FixedReal from_int(std::int64_t v) { return from_raw(Mantissa(v) * kUnit); }

  /// Nearest representable value to p/q; exact whenever q divides the unit.
  static FixedReal from_ratio(const BigInt& p, const BigInt& q) {
    if (q == 0) throw DomainError("zero denominator");
    bool exact = false;
    BigInt m = detail::round_div(BigInt(p * BigInt(kUnit)), q, exact);
    return from_raw(detail::narrow_int<Mantissa>(m), exact ? 0 : 1);
  }

  static FixedReal from_ratio(std::int64_t p, std::int64_t q) { return from_ratio(BigInt(p), BigInt(q)); }

  static FixedReal from_double(double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite value");
    if (v == 0.0) return {};
    int exp = 0;
    double frac = std::frexp(v, &exp);
    auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    // v = mant * 2^(exp - 53)
    const int shift = exp - 53 + kScaleBits;
    BigInt m = BigInt(mant) * kRadixCofactor;
    if (shift >= 0) return from_raw(detail::narrow_int<Mantissa>(BigInt(m << shift)));
    bool exact = false;
    m = detail::round_div(m, BigInt(BigInt(1) << -shift), exact);
    return from_raw(detail::narrow_int<Mantissa>(m), exact ? 0 : 1);
  }

  /// Uniform grid point in [0,1) from 64 random bits.
  static FixedReal from_unit_word(std::uint64_t w) {
    static const Mantissa step = kUnit >> 64;
    return from_raw(step * w);
  }

  /// Accepts "[-]123.456[e-7]" and "p/q".
  static FixedReal parse(std::string_view text) {
    auto bad = [&] { return DomainError("malformed number '" + std::string(text) + "'"); };
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw bad();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      auto p = parse_integer(text.substr(0, slash));
      auto q = parse_integer(text.substr(slash + 1));
      if (!p || !q || *q == 0) throw bad();
      return from_ratio(*p, *q);
    }
    bool neg = false;
    std::size_t i = 0;
    if (text[i] == '-' || text[i] == '+') neg = text[i++] == '-';
    BigInt digits = 0;
    int frac_digits = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (c >= '0' && c <= '9') {
        digits = digits * 10 + (c - '0');
        seen_digit = true;
        if (seen_point) ++frac_digits;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else {
        break;
      }
    }
    if (!seen_digit) throw bad();
    int exponent = 0;
    if (i < text.size()) {
      if (text[i] != 'e' && text[i] != 'E') throw bad();
      auto e = text.substr(i + 1);
      if (!e.empty() && e.front() == '+') e.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(e.data(), e.data() + e.size(), exponent);
      if (ec != std::errc() || ptr != e.data() + e.size()) throw bad();
    }
    if (neg) digits = -digits;
    int scale = exponent - frac_digits;
    if (scale >= 0) return from_ratio(BigInt(digits * mp::pow(BigInt(10), scale)), BigInt(1));
    return from_ratio(digits, mp::pow(BigInt(10), -scale));
  }

  const Mantissa& mantissa() const { return m_; }
  std::uint64_t err_ulps() const { return err_; }
  bool is_exact() const { return err_ == 0; }
  Mantissa lower() const { return m_ - err_; }
  Mantissa upper() const { return m_ + err_; }

  FixedReal with_extra_error(std::uint64_t ulps) const { return from_raw(m_, detail::sat_add(err_, ulps)); }

  FixedReal operator-() const { return from_raw(-m_, err_); }

  FixedReal& operator+=(const FixedReal& o) {
    m_ += o.m_;
    err_ = detail::sat_add(err_, o.err_);
    return *this;
  }
  FixedReal& operator-=(const FixedReal& o) {
    m_ -= o.m_;
    err_ = detail::sat_add(err_, o.err_);
    return *this;
  }
  friend FixedReal operator+(FixedReal a, const FixedReal& b) { return a += b; }
  friend FixedReal operator-(FixedReal a, const FixedReal& b) { return a -= b; }

  friend FixedReal operator*(const FixedReal& a, std::int64_t k) {
    return from_raw(a.m_ * k, detail::sat_mul(a.err_, detail::uabs(k)));
  }
  friend FixedReal operator*(std::int64_t k, const FixedReal& a) { return a * k; }

  friend FixedReal operator*(const FixedReal& a, const FixedReal& b) {
    const WideInt ma(a.m_), mb(b.m_), unit(kUnit);
    bool exact = false;
    WideInt m = detail::round_div(WideInt(ma * mb), unit, exact);
    const WideInt ea(a.err_), eb(b.err_);
    WideInt spread = mp::abs(ma) * eb + mp::abs(mb) * ea + ea * eb;
    std::uint64_t err = detail::saturate_u64(detail::ceil_div_nonneg(spread, unit));
    if (!exact) err = detail::sat_add(err, 1);
    return from_raw(detail::narrow_int<Mantissa>(m), err);
  }

  friend FixedReal operator/(const FixedReal& a, std::int64_t k) {
    if (k == 0) throw DomainError("division by zero");
    bool exact = false;
    Mantissa m = detail::round_div(a.m_, Mantissa(k), exact);
    std::uint64_t err = a.err_ == 0 ? 0 : (a.err_ - 1) / detail::uabs(k) + 1;
    if (!exact) err = detail::sat_add(err, 1);
    return from_raw(std::move(m), err);
  }

  friend FixedReal operator/(const FixedReal& a, const FixedReal& b) {
    const WideInt ma(a.m_), mb(b.m_), unit(kUnit);
    const WideInt amb = mp::abs(mb);
    if (amb <= WideInt(b.err_)) throw PrecisionExhausted("divisor interval contains zero");
    bool exact = false;
    WideInt m = detail::round_div(WideInt(ma * unit), mb, exact);
    std::uint64_t err = 0;
    if (a.err_ != 0 || b.err_ != 0) {
      WideInt num = unit * (WideInt(a.err_) * amb + mp::abs(ma) * WideInt(b.err_));
      WideInt den = amb * (amb - WideInt(b.err_));
      err = detail::saturate_u64(detail::ceil_div_nonneg(num, den));
    }
    if (!exact) err = detail::sat_add(err, 1);
    return from_raw(detail::narrow_int<Mantissa>(m), err);
  }

  FixedReal abs() const { return from_raw(m_ < 0 ? Mantissa(-m_) : m_, err_); }

  /// Fractional part {x} (floor convention). The error bound carries over; a
  /// value whose interval straddles an integer is wrapped by its midpoint.
  FixedReal frac() const {
    if (m_ >= 0 && m_ < kUnit) return *this;
    Mantissa r = m_ % kUnit;
    if (r < 0) r += kUnit;
    return from_raw(std::move(r), err_);
  }

  std::int64_t floor_int() const {
    Mantissa q = m_ / kUnit;
    if (m_ < 0 && q * kUnit != m_) --q;
    return detail::narrow_int<std::int64_t>(q);
  }

  double to_double() const { return static_cast<double>(m_) / kUnitAsDouble; }

  /// Decimal rendering of the midpoint, rounded to `digits` places, trailing
  /// zeros removed.
  std::string to_decimal(int digits = 20) const {
    bool exact = false;
    BigInt scaled = detail::round_div(BigInt(BigInt(m_) * mp::pow(BigInt(10), digits)), BigInt(kUnit), exact);
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string s = scaled.str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
    std::string int_part = s.substr(0, s.size() - digits);
    std::string frac_part = s.substr(s.size() - digits);
    while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();
    std::string out = (neg ? "-" : "") + int_part;
    if (!frac_part.empty()) out += "." + frac_part;
    return out;
  }

  /// Representation equality: same mantissa and same error bound.
  bool operator==(const FixedReal&) const = default;

  friend std::ostream& operator<<(std::ostream& os, const FixedReal& v) {
    os << v.to_decimal();
    if (v.err_ != 0) os << "(+-" << v.err_ << "ulp)";
    return os;
  }

 private:
  static std::optional<BigInt> parse_integer(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
      neg = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) return std::nullopt;
    BigInt v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + (c - '0');
    }
    return neg ? BigInt(-v) : v;
  }

  Mantissa m_ = 0;
  std::uint64_t err_ = 0;
};

inline FixedReal fixed_one() { return FixedReal::from_raw(kUnit); }

enum class Ordering { Less, Equal, Greater, Ambiguous };

/// Less/Greater only when the error intervals are disjoint. Equal is returned
/// solely for two exact, identical values; any other overlap is Ambiguous.
inline Ordering guarded_compare(const FixedReal& a, const FixedReal& b) {
  if (a.upper() < b.lower()) return Ordering::Less;
  if (a.lower() > b.upper()) return Ordering::Greater;
  if (a.is_exact() && b.is_exact() && a.mantissa() == b.mantissa()) return Ordering::Equal;
  return Ordering::Ambiguous;
}

enum class Side { Below, AtOrAbove, Ambiguous };

/// Half-open placement of p relative to a boundary: AtOrAbove when every
/// admissible p is >= every admissible boundary value.
inline Side side_of(const FixedReal& p, const FixedReal& boundary) {
  if (p.upper() < boundary.lower()) return Side::Below;
  if (p.lower() >= boundary.upper()) return Side::AtOrAbove;
  return Side::Ambiguous;
}

inline bool definitely_below(const FixedReal& p, const FixedReal& boundary, const char* what = nullptr) {
  switch (side_of(p, boundary)) {
    case Side::Below: return true;
    case Side::AtOrAbove: return false;
    default: throw PrecisionExhausted(what ? what : "ambiguous comparison");
  }
}

/// Sign of the value, -1/0/+1; zero only for an exact zero.
inline int guarded_sign(const FixedReal& v) {
  switch (guarded_compare(v, FixedReal{})) {
    case Ordering::Less: return -1;
    case Ordering::Greater: return 1;
    case Ordering::Equal: return 0;
    default: throw PrecisionExhausted("sign undecidable");
  }
}

inline void require_margin(const FixedReal& v, std::uint64_t margin = kDefaultErrMargin) {
  if (v.err_ulps() > margin) throw PrecisionExhausted("error bound exceeds safety margin");
}

}  // namespace ergolab
