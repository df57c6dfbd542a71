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

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"

#include "ergolab/angle.hpp"
#include "ergolab/induced.hpp"
#include "ergolab/maps.hpp"
#include "oracles.hpp"

namespace ergolab {
namespace {

FixedReal dec(const char* s) { return FixedReal::parse(s); }
IntervalSet left_half() { return IntervalSet({{FixedReal{}, FixedReal::from_ratio(1, 2)}}); }

TEST(InducePointTest, Examples) {
  CircleRotation quarter(AngleSpec::rational(1, 4));
  auto f = plus_minus_step();
  auto a = induce_point(quarter, f, left_half(), dec("0.1"));
  EXPECT_EQ(a.n, 1);
  EXPECT_EQ(a.return_point, dec("0.35"));
  EXPECT_EQ(a.f_tilde, 1);
  auto b = induce_point(quarter, f, left_half(), dec("0.3"));
  EXPECT_EQ(b.n, 3);
  EXPECT_EQ(b.return_point, dec("0.05"));
  EXPECT_EQ(b.f_tilde, -1);
  auto c = induce_point(CircleRotation(AngleSpec::preset("golden")), f, IntervalSet::whole(), dec("0.7"));
  EXPECT_EQ(c.n, 1);
  EXPECT_EQ(c.f_tilde, f(dec("0.7")));
}

TEST(InducePointTest, Errors) {
  CircleRotation quarter(AngleSpec::rational(1, 4));
  EXPECT_THROW(induce_point(quarter, plus_minus_step(), left_half(), dec("0.6")), DomainError);
  IntervalSet tiny({{dec("0.6"), dec("0.61")}});
  try {
    induce_point(quarter, plus_minus_step(), tiny, dec("0.605"), 3);
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_STREQ(e.what(), "return budget exceeded");
  }
}

TEST(InducePointTest, ReturnPointLiesInTarget) {
  CircleRotation rot(AngleSpec::preset("sqrt2"));
  IntervalSet a({{dec("0.1"), dec("0.2")}, {dec("0.5"), dec("0.55")}});
  std::mt19937_64 rng(73);
  for (int i = 0; i < 1000; ++i) {
    FixedReal x = FixedReal::from_unit_word(rng());
    if (!a.contains(x)) continue;
    auto s = induce_point(rot, plus_minus_step(), a, x);
    EXPECT_TRUE(a.contains(s.return_point));
    FixedReal p = x;
    for (std::int64_t k = 1; k < s.n; ++k) {
      p = rot.apply(p);
      EXPECT_FALSE(a.contains(p));
    }
  }
}

TEST(InducePointTest, CompositionMatchesFilteredOrbit) {
  // Rational oracle: visits of the raw orbit to A, and cumulative sums at those visits.
  const oracle::RationalStep g{{{0, 1}, {1, 2}}, {1, -1}};
  for (std::int64_t q : {5, 7, 12}) {
    for (std::int64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      oracle::Rational x{1, 10};
      oracle::RotationTable table(p, q, x);
      CircleRotation rot(AngleSpec::rational(p, q));
      IntervalSet a({{FixedReal{}, dec("0.3")}});
      std::vector<std::int64_t> visit_times, visit_sums;
      std::int64_t sum = 0;
      for (std::int64_t n = 1; n <= 1000; ++n) {
        sum += g(table.at(n - 1));
        auto pt = table.at(n);
        if (oracle::less(pt, {3, 10})) {
          visit_times.push_back(n);
          visit_sums.push_back(sum);
        }
      }
      FixedReal cur = oracle::to_fixed(x);
      std::int64_t t = 0, s = 0;
      for (std::size_t k = 0; k < visit_times.size(); ++k) {
        auto step = induce_point(rot, plus_minus_step(), a, cur);
        t += step.n;
        s += step.f_tilde;
        cur = step.return_point;
        EXPECT_EQ(t, visit_times[k]);
        EXPECT_EQ(s, visit_sums[k]);
      }
    }
  }
}

TEST(InducedExactTest, QuarterRotation) {
  auto exact = induced_exact(CircleRotation(AngleSpec::rational(1, 4)), plus_minus_step(), left_half());
  EXPECT_EQ(exact.mean_n, FixedReal::from_int(2));
  EXPECT_EQ(exact.mean_f_tilde, FixedReal{});
  ASSERT_EQ(exact.cells.size(), 2u);
  EXPECT_EQ(exact.cells[0].n, 1);
  EXPECT_EQ(exact.cells[0].f_tilde, 1);
  EXPECT_EQ(exact.cells[1].lo, dec("0.25"));
  EXPECT_EQ(exact.cells[1].n, 3);
  EXPECT_EQ(exact.cells[1].f_tilde, -1);
  auto whole = induced_exact(CircleRotation(AngleSpec::rational(1, 4)), plus_minus_step(), IntervalSet::whole());
  EXPECT_EQ(whole.mean_n, fixed_one());
  EXPECT_EQ(whole.mean_f_tilde, FixedReal{});
}

TEST(InducedExactTest, GoldenSatisfiesKacExactly) {
  auto exact = induced_exact(CircleRotation(AngleSpec::preset("golden")), plus_minus_step(), left_half());
  FixedReal kac = exact.mean_n - FixedReal::from_int(2);
  EXPECT_LT(mp::abs(kac.mantissa()), Mantissa(1) << 40);
  EXPECT_LT(mp::abs(exact.mean_f_tilde.mantissa()), Mantissa(1) << 40);
}

TEST(InducedChecksTest, WholeSpaceAndQuarter) {
  auto whole = induced_checks(CircleRotation(AngleSpec::preset("golden")), plus_minus_step(), IntervalSet::whole(), 1000, 5);
  EXPECT_EQ(whole.mean_n, 1.0);
  EXPECT_EQ(whole.samples, 1000);
  auto quarter = induced_checks(CircleRotation(AngleSpec::rational(1, 4)), plus_minus_step(), left_half(), 10000, 6);
  EXPECT_NEAR(quarter.mean_n, 2.0, 4 * quarter.se_n);
  EXPECT_NEAR(quarter.mean_f_tilde, 0.0, 4 * quarter.se_f_tilde);
  EXPECT_THROW(induced_checks(CircleRotation(AngleSpec::rational(1, 4)), plus_minus_step(), left_half(), 50, 6), DomainError);
}

TEST(InducedChecksTest, KacAndZeroMeanOnErgodicSystems) {
  auto f = plus_minus_step();
  IntervalSet small({{dec("0.2"), dec("0.3")}, {dec("0.7"), dec("0.75")}});
  IntervalSet halfset = left_half();
  // Reversal of three intervals with an irrational length.
  FixedReal l0 = AngleSpec::preset("golden").resolved() / 2;
  IntervalExchange iet({l0, dec("0.25"), fixed_one() - l0 - dec("0.25")}, {2, 1, 0});
  for (const IntervalSet* a : {&halfset, &small}) {
    for (int which = 0; which < 2; ++which) {
      InducedStats st = which == 0 ? induced_checks(CircleRotation(AngleSpec::preset("golden")), f, *a, 20000, 7)
                                   : induced_checks(iet, f, *a, 20000, 8);
      EXPECT_NEAR(st.kac_ratio(), 1.0, 4 * st.se_n * st.target_measure);
      EXPECT_NEAR(st.mean_f_tilde, 0.0, 4 * st.se_f_tilde);
      EXPECT_EQ(st.censored, 0);
    }
  }
}

TEST(InducedChecksTest, CensoredSamplesAreCounted) {
  IntervalSet tiny({{dec("0.6"), dec("0.61")}});
  auto st = induced_checks(CircleRotation(AngleSpec::preset("golden")), plus_minus_step(), tiny, 200, 9, 5);
  EXPECT_EQ(st.samples + st.censored, 200);
  EXPECT_GT(st.censored, 0);
}

TEST(InducedChecksTest, DeterministicUnderSeed) {
  auto a = induced_checks(CircleRotation(AngleSpec::preset("golden")), plus_minus_step(), left_half(), 500, 10);
  auto b = induced_checks(CircleRotation(AngleSpec::preset("golden")), plus_minus_step(), left_half(), 500, 10);
  EXPECT_EQ(a.mean_n, b.mean_n);
  EXPECT_EQ(a.mean_f_tilde, b.mean_f_tilde);
}

}  // namespace
}  // namespace ergolab
