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

// Zero times of Birkhoff sums and near-returns of the base orbit for the
// cylindrical cascade C(x, z) = (Sx, z + f(x)).

#include <cstdint>
#include <vector>

#include "ergolab/circle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/return_record.hpp"
#include "ergolab/step_cocycle.hpp"

namespace ergolab {

/// State of the cascade: base point and exact integer fiber coordinate.
struct CascadeState {
  FixedReal x;
  std::int64_t z = 0;
};

template <CircleMap Map>
CascadeState cascade_step(const Map& map, const IntegerCocycle& f, const CascadeState& s) {
  return {map.apply(s.x), s.z + f(s.x)};
}

/// All n <= N with S_n(x) = 0, ascending. Distances to x are recorded.
template <CircleMap Map>
std::vector<ReturnRecord> find_zero_sums(const Map& map, const IntegerCocycle& f, const FixedReal& x, std::int64_t n_max) {
  std::vector<ReturnRecord> out;
  for_each_birkhoff(map, f, x, n_max, [&](std::int64_t n, std::int64_t sum, const FixedReal& p) {
    if (sum == 0) out.push_back({n, FixedReal{}, circle_distance(p, x), std::nullopt});
  });
  return out;
}

/// All n <= N with d(S^n x, x) < eps.
template <CircleMap Map>
std::vector<std::int64_t> near_returns(const Map& map, const FixedReal& x, std::int64_t n_max, const FixedReal& eps) {
  if (guarded_compare(eps, FixedReal{}) != Ordering::Greater) throw DomainError("eps must be positive");
  if (n_max < 1) throw DomainError("scan length must be >= 1");
  std::vector<std::int64_t> out;
  FixedReal p = x;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    at_step(n, [&] {
      p = map.apply(p);
      if (detail::within(circle_distance(p, x), eps)) out.push_back(n);
      return 0;
    });
  }
  return out;
}

/// Times that are both zero-sum times and eps-near returns.
template <CircleMap Map>
std::vector<ReturnRecord> joint_zero_returns(const Map& map, const IntegerCocycle& f, const FixedReal& x,
                                             std::int64_t n_max, const FixedReal& eps) {
  if (guarded_compare(eps, FixedReal{}) != Ordering::Greater) throw DomainError("eps must be positive");
  std::vector<ReturnRecord> out;
  for_each_birkhoff(map, f, x, n_max, [&](std::int64_t n, std::int64_t sum, const FixedReal& p) {
    if (sum != 0) return;
    FixedReal d = circle_distance(p, x);
    if (at_step(n, [&] { return detail::within(d, eps); })) out.push_back({n, FixedReal{}, d, std::nullopt});
  });
  return out;
}

}  // namespace ergolab
