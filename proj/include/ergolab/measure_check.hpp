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

// Empirical measure-preservation checks: push uniform samples through a map
// and compare the image's cell histogram with the invariant measure using
// the Dvoretzky-Kiefer-Wolfowitz bound on the cell-index CDF.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/skew_product.hpp"
#include "ergolab/special_flow.hpp"

namespace ergolab {

/// sup |F_n - F| <= sqrt(ln(2 / (1 - confidence)) / (2n)) with the given confidence.
inline double dkw_tolerance(std::int64_t n, double confidence) {
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(n)));
}

struct HistogramCheck {
  std::int64_t samples = 0;
  double statistic = 0.0;  // sup over cells of |empirical CDF - expected CDF|
  double tolerance = 0.0;
  bool passed() const { return statistic <= tolerance; }
};

inline HistogramCheck dkw_check(std::span<const std::int64_t> counts, std::span<const double> expected,
                                double confidence) {
  if (counts.size() != expected.size()) throw DomainError("histogram and expectation differ in size");
  HistogramCheck out;
  for (auto c : counts) out.samples += c;
  double emp = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    emp += static_cast<double>(counts[i]) / static_cast<double>(out.samples);
    ref += expected[i];
    out.statistic = std::max(out.statistic, std::abs(emp - ref));
  }
  out.tolerance = dkw_tolerance(out.samples, confidence);
  return out;
}

namespace detail {

inline std::size_t grid_bin(const FixedReal& v, double scale, std::size_t bins) {
  auto b = static_cast<std::size_t>(std::floor(v.to_double() / scale * static_cast<double>(bins)));
  return std::min(b, bins - 1);
}

}  // namespace detail

/// Uniform samples on the circle, image under `map`, `bins` equal cells.
template <CircleMap Map>
HistogramCheck histogram_check(const Map& map, std::int64_t samples, std::uint64_t seed, std::size_t bins = 400,
                               double confidence = 0.999) {
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> counts(bins, 0);
  for (std::int64_t i = 0; i < samples; ++i) ++counts[detail::grid_bin(map.apply(FixedReal::from_unit_word(rng())), 1.0, bins)];
  std::vector<double> expected(bins, 1.0 / static_cast<double>(bins));
  return dkw_check(counts, expected, confidence);
}

/// Uniform samples under the roof (normalized area), flowed for time t, on a
/// grid x grid partition of [0,1) x [0, max roof).
template <CircleMap Map>
HistogramCheck histogram_check(const SpecialFlow<Map>& flow, const FixedReal& t, std::int64_t samples,
                               std::uint64_t seed, std::size_t grid = 20, double confidence = 0.999) {
  const Roof& roof = flow.roof();
  const double top = roof.max_height().to_double();
  const FixedReal top_fixed = roof.max_height();
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> counts(grid * grid, 0);
  for (std::int64_t i = 0; i < samples;) {
    FlowState s{FixedReal::from_unit_word(rng()), FixedReal::from_unit_word(rng()) * top_fixed};
    if (side_of(s.b, roof.height_at(s.a)) != Side::Below) continue;
    ++i;
    FlowState img = flow.step(s, t).state;
    ++counts[detail::grid_bin(img.a, 1.0, grid) * grid + detail::grid_bin(img.b, top, grid)];
  }
  std::vector<double> expected(grid * grid, 0.0);
  const double area = roof.area().to_double();
  for (std::size_t c = 0; c < roof.cells().size(); ++c) {
    const double a0 = roof.cells().lower(c).to_double(), a1 = roof.cells().upper(c).to_double();
    const double h = roof.height(c).to_double();
    for (std::size_t i = 0; i < grid; ++i) {
      const double x0 = static_cast<double>(i) / grid, x1 = static_cast<double>(i + 1) / grid;
      const double w = std::max(0.0, std::min(a1, x1) - std::max(a0, x0));
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < grid; ++j) {
        const double y0 = top * j / grid, y1 = top * (j + 1) / grid;
        expected[i * grid + j] += w * std::max(0.0, std::min(h, y1) - y0) / area;
      }
    }
  }
  return dkw_check(counts, expected, confidence);
}

/// Uniform samples of the unit square under one skew-product step.
template <CircleMap Base, InvertibleCircleMap Fiber>
HistogramCheck histogram_check(const SkewProduct<Base, Fiber>& r, std::int64_t samples, std::uint64_t seed,
                               std::size_t grid = 20, double confidence = 0.999) {
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> counts(grid * grid, 0);
  for (std::int64_t i = 0; i < samples; ++i) {
    ProductState s{FixedReal::from_unit_word(rng()), FixedReal::from_unit_word(rng())};
    ProductState img = r.step(s);
    ++counts[detail::grid_bin(img.x, 1.0, grid) * grid + detail::grid_bin(img.y, 1.0, grid)];
  }
  std::vector<double> expected(grid * grid, 1.0 / static_cast<double>(grid * grid));
  return dkw_check(counts, expected, confidence);
}

}  // namespace ergolab
