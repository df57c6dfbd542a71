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

// Empirical check of the sublinearity condition mu(|S_n f| > eps n) -> 0.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/step_cocycle.hpp"

namespace ergolab {

struct WeissPoint {
  std::int64_t n = 0;
  std::int64_t exceed_count = 0;  // samples with |S_n| > eps n
  std::int64_t samples = 0;
  std::int64_t zero_visits = 0;   // total zero times <= n over all samples
  std::int64_t samples_with_zero = 0;

  double probability() const { return static_cast<double>(exceed_count) / static_cast<double>(samples); }
  FixedReal probability_exact() const { return FixedReal::from_ratio(exceed_count, samples); }
};

template <CircleMap Map>
std::vector<WeissPoint> weiss_estimate(const Map& map, const IntegerCocycle& f, std::vector<std::int64_t> n_list,
                                       const FixedReal& eps, std::int64_t samples, std::uint64_t seed) {
  if (samples < 100) throw DomainError("weiss_estimate needs at least 100 samples");
  if (guarded_compare(eps, FixedReal{}) != Ordering::Greater) throw DomainError("eps must be positive");
  if (n_list.empty()) throw DomainError("n_list is empty");
  for (auto n : n_list) {
    if (n < 1) throw DomainError("n_list entries must be >= 1");
  }
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());

  std::vector<WeissPoint> out;
  std::vector<FixedReal> thresholds;
  for (auto n : n_list) {
    out.push_back({n, 0, samples, 0, 0});
    thresholds.push_back(eps * n);
  }
  std::mt19937_64 rng(seed);
  for (std::int64_t s = 0; s < samples; ++s) {
    const FixedReal x = FixedReal::from_unit_word(rng());
    std::size_t next = 0;
    std::int64_t zeros = 0;
    for_each_birkhoff(map, f, x, n_list.back(), [&](std::int64_t n, std::int64_t sum, const FixedReal&) {
      if (sum == 0) ++zeros;
      if (n != n_list[next]) return;
      auto& point = out[next];
      switch (guarded_compare(FixedReal::from_int(sum < 0 ? -sum : sum), thresholds[next])) {
        case Ordering::Greater: ++point.exceed_count; break;
        case Ordering::Ambiguous: throw PrecisionExhausted("|S_n| ambiguous against eps n");
        default: break;
      }
      point.zero_visits += zeros;
      if (zeros > 0) ++point.samples_with_zero;
      ++next;
    });
  }
  return out;
}

}  // namespace ergolab
