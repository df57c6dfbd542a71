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

#include <cstdint>
#include <numeric>
#include <regex>
#include <string>
#include <string_view>

#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"

namespace ergolab {

/// A rotation number or slope given symbolically and resolved once to
/// FixedReal. `value` keeps the full number (slopes need it); `resolved` is
/// its fractional part, the rotation angle on the circle.
class AngleSpec {
 public:
  enum class Kind { Rational, QuadraticSurd, Preset };

  static AngleSpec rational(std::int64_t p, std::int64_t q) {
    if (q < 1) throw DomainError("rational angle needs q >= 1");
    std::int64_t g = std::gcd(p, q);
    AngleSpec s;
    s.kind_ = Kind::Rational;
    s.a_ = p / g;
    s.d_ = q / g;
    s.value_ = FixedReal::from_ratio(s.a_, s.d_);
    s.resolved_ = s.value_.frac();
    return s;
  }

  /// (a + b*sqrt(c)) / d with c > 0 not a perfect square and b != 0.
  static AngleSpec surd(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    if (d == 0) throw DomainError("surd denominator is zero");
    if (b == 0 || c <= 0) throw DomainError("surd needs b != 0 and c > 0");
    BigInt root = mp::sqrt(BigInt(c));
    if (root * root == c) throw DomainError("surd radicand is a perfect square");
    AngleSpec s;
    s.kind_ = Kind::QuadraticSurd;
    s.a_ = a;
    s.b_ = b;
    s.c_ = c;
    s.d_ = d;
    s.value_ = resolve_surd(a, b, c, d);
    s.resolved_ = s.value_.frac();
    return s;
  }

  static AngleSpec preset(std::string_view name) {
    AngleSpec s;
    if (name == "golden") {
      s = surd(-1, 1, 5, 2);
    } else if (name == "sqrt2") {
      s = surd(0, 1, 2, 1);
    } else {
      throw DomainError("unknown angle preset '" + std::string(name) + "'");
    }
    s.kind_ = Kind::Preset;
    s.preset_ = std::string(name);
    return s;
  }

  /// "rational:p/q", "surd:(a+b*sqrt(c))/d", "preset:golden|sqrt2".
  static AngleSpec parse(std::string_view text) {
    const std::string t(text);
    static const std::regex rational_re(R"(^rational:\s*(-?\d+)\s*/\s*(\d+)\s*$)");
    static const std::regex surd_re(
        R"(^surd:\s*\(\s*(-?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*(-?\d+)\s*$)");
    static const std::regex preset_re(R"(^preset:\s*(\w+)\s*$)");
    std::smatch m;
    try {
      if (std::regex_match(t, m, rational_re)) return rational(std::stoll(m[1]), std::stoll(m[2]));
      if (std::regex_match(t, m, surd_re)) {
        std::int64_t b = std::stoll(m[3]);
        if (m[2] == "-") b = -b;
        return surd(std::stoll(m[1]), b, std::stoll(m[4]), std::stoll(m[5]));
      }
      if (std::regex_match(t, m, preset_re)) return preset(m[1].str());
    } catch (const std::out_of_range&) {
      throw DomainError("angle component out of range in '" + t + "'");
    }
    throw DomainError("malformed angle '" + t + "'");
  }

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::Rational; }
  const FixedReal& value() const { return value_; }
  const FixedReal& resolved() const { return resolved_; }

  /// Numerator/denominator of a rational angle.
  std::int64_t numerator() const { return a_; }
  std::int64_t denominator() const { return d_; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Rational: return "rational:" + std::to_string(a_) + "/" + std::to_string(d_);
      case Kind::QuadraticSurd:
        return "surd:(" + std::to_string(a_) + (b_ < 0 ? "-" : "+") + std::to_string(detail::uabs(b_)) + "*sqrt(" +
               std::to_string(c_) + "))/" + std::to_string(d_);
      case Kind::Preset: return "preset:" + preset_;
    }
    return {};
  }

 private:
  // floor(sqrt(c) * U * 2^64) via integer square root, then scaled back down
  // with rounding: total error <= 1 ulp for |b| < 2^63.
  static FixedReal resolve_surd(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    constexpr int guard = 64;
    const BigInt unit(kUnit);
    const BigInt scaled_unit = unit << guard;
    BigInt root = mp::sqrt(BigInt(BigInt(c) * scaled_unit * scaled_unit));
    BigInt num = BigInt(a) * scaled_unit + BigInt(b) * root;
    bool exact = false;
    BigInt m = detail::round_div(num, BigInt(BigInt(d) << guard), exact);
    return FixedReal::from_raw(detail::narrow_int<Mantissa>(m), 1);
  }

  Kind kind_ = Kind::Rational;
  std::int64_t a_ = 0, b_ = 0, c_ = 0, d_ = 1;
  std::string preset_;
  FixedReal value_;
  FixedReal resolved_;
};

}  // namespace ergolab
