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

// First-return (induced) maps of a cascade to a set A: return time n(x) and
// the induced cocycle f~(x) = sum_{i < n(x)} f(S^i x).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ergolab/circle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/step_cocycle.hpp"

namespace ergolab {

inline constexpr std::int64_t kDefaultReturnBudget = 1'000'000;

struct InducedSample {
  FixedReal x;
  std::int64_t n = 0;
  FixedReal return_point;
  std::int64_t f_tilde = 0;
};

template <CircleMap Map>
InducedSample induce_point(const Map& map, const IntegerCocycle& f, const IntervalSet& target, const FixedReal& x,
                           std::int64_t budget = kDefaultReturnBudget) {
  if (budget < 1) throw DomainError("return budget must be >= 1");
  if (!target.contains(x)) throw DomainError("start point must lie in the target set");
  FixedReal p = x;
  std::int64_t sum = 0;
  for (std::int64_t n = 1; n <= budget; ++n) {
    bool back = at_step(n, [&] {
      sum += f(p);
      p = map.apply(p);
      return target.contains(p);
    });
    if (back) return {x, n, p, sum};
  }
  throw BudgetExceeded("return budget exceeded");
}

struct InducedStats {
  std::int64_t samples = 0;   // completed returns
  std::int64_t censored = 0;  // samples that hit the return budget
  double mean_n = 0.0;
  double se_n = 0.0;
  double mean_f_tilde = 0.0;
  double se_f_tilde = 0.0;
  double target_measure = 0.0;

  /// E[n] * mu(A); Kac predicts 1.
  double kac_ratio() const { return mean_n * target_measure; }
};

/// Monte Carlo over uniform points of A (rejection sampling from [0,1)).
/// `sink`, when given, sees every completed sample in draw order.
template <CircleMap Map>
InducedStats induced_checks(const Map& map, const IntegerCocycle& f, const IntervalSet& target, std::int64_t samples,
                            std::uint64_t seed, std::int64_t budget = kDefaultReturnBudget,
                            const std::function<void(const InducedSample&)>& sink = {}) {
  if (samples < 100) throw DomainError("induced_checks needs at least 100 samples");
  std::mt19937_64 rng(seed);
  InducedStats stats;
  stats.target_measure = target.measure().to_double();
  long double sn = 0, sn2 = 0, sf = 0, sf2 = 0;
  for (std::int64_t drawn = 0; drawn < samples;) {
    FixedReal x = FixedReal::from_unit_word(rng());
    if (!target.contains(x)) continue;
    ++drawn;
    try {
      InducedSample s = induce_point(map, f, target, x, budget);
      sn += s.n;
      sn2 += static_cast<long double>(s.n) * s.n;
      sf += s.f_tilde;
      sf2 += static_cast<long double>(s.f_tilde) * s.f_tilde;
      ++stats.samples;
      if (sink) sink(s);
    } catch (const BudgetExceeded&) {
      ++stats.censored;
    }
  }
  const auto k = static_cast<long double>(stats.samples);
  if (stats.samples > 1) {
    auto mean_se = [k](long double s, long double s2, double& mean, double& se) {
      long double m = s / k;
      long double var = (s2 - k * m * m) / (k - 1);
      mean = static_cast<double>(m);
      se = static_cast<double>(std::sqrt(std::max<long double>(var, 0) / k));
    };
    mean_se(sn, sn2, stats.mean_n, stats.se_n);
    mean_se(sf, sf2, stats.mean_f_tilde, stats.se_f_tilde);
  }
  return stats;
}

struct InducedCell {
  FixedReal lo;
  FixedReal hi;
  std::int64_t n = 0;
  std::int64_t f_tilde = 0;
};

struct InducedExact {
  std::vector<InducedCell> cells;
  FixedReal mean_n;        // (1/mu(A)) * integral_A n
  FixedReal mean_f_tilde;  // (1/mu(A)) * integral_A f~
};

/// Exact expectations over A for a rotation, by splitting A at the preimages
/// {b - k alpha} of every boundary b of A and f, k <= K. On each resulting
/// cell n and f~ are constant once K covers the longest return.
inline InducedExact induced_exact(const CircleRotation& rot, const IntegerCocycle& f, const IntervalSet& target,
                                  std::int64_t budget = kDefaultReturnBudget) {
  std::vector<FixedReal> boundaries = f.cells().breakpoints();
  for (const auto& iv : target.parts()) {
    boundaries.push_back(iv.lo.frac());
    boundaries.push_back(iv.hi.frac());
  }
  for (std::int64_t depth = 8;; depth *= 2) {
    std::vector<FixedReal> cuts;
    for (const auto& b : boundaries) {
      for (std::int64_t k = 0; k <= depth; ++k) cuts.push_back(rot.apply_power(b, -k));
    }
    std::sort(cuts.begin(), cuts.end(), [](const FixedReal& a, const FixedReal& b) {
      return a.mantissa() < b.mantissa();
    });
    std::vector<FixedReal> unique;
    for (auto& c : cuts) {
      if (!unique.empty()) {
        if (unique.back() == c) continue;  // same boundary listed twice
        auto o = guarded_compare(unique.back(), c);
        if (o == Ordering::Equal) continue;
        if (o == Ordering::Ambiguous) throw PrecisionExhausted("coincident cut points");
      }
      unique.push_back(std::move(c));
    }
    unique.push_back(fixed_one());

    InducedExact out;
    std::int64_t longest = 0;
    FixedReal total_n, total_f;
    for (std::size_t i = 0; i + 1 < unique.size(); ++i) {
      const FixedReal& lo = unique[i];
      const FixedReal& hi = unique[i + 1];
      FixedReal mid = (lo + hi) / 2;
      if (!target.contains(mid)) continue;
      InducedSample s = induce_point(rot, f, target, mid, budget);
      longest = std::max(longest, s.n);
      out.cells.push_back({lo, hi, s.n, s.f_tilde});
      total_n += (hi - lo) * s.n;
      total_f += (hi - lo) * s.f_tilde;
    }
    if (longest <= depth) {
      out.mean_n = total_n / target.measure();
      out.mean_f_tilde = total_f / target.measure();
      return out;
    }
    if (depth > budget) throw BudgetExceeded("return budget exceeded");
  }
}

}  // namespace ergolab
