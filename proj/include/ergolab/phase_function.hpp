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
#include <utility>
#include <vector>

#include "ergolab/circle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/special_flow.hpp"

namespace ergolab {

/// Observable on a special-flow phase space, constant on rectangles: the
/// base partition refines the roof's, and each column is cut into height
/// bands. Zero mean against area is enforced exactly.
class PhaseFunction {
 public:
  struct Column {
    std::vector<FixedReal> band_cuts;  // interior cut heights, strictly inside (0, r)
    std::vector<FixedReal> values;     // band_cuts.size() + 1 values, bottom band first
  };

  PhaseFunction(const Roof& roof, Partition cells, std::vector<Column> columns)
      : cells_(std::move(cells)), columns_(std::move(columns)) {
    if (columns_.size() != cells_.size()) throw DomainError("phase function needs one column per base cell");
    for (const auto& rb : roof.cells().breakpoints()) {
      bool found = false;
      for (const auto& pb : cells_.breakpoints()) found = found || pb.mantissa() == rb.mantissa();
      if (!found) throw DomainError("phase cells must refine the roof cells");
    }
    BigInt mean = 0;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      auto& col = columns_[i];
      const FixedReal& top = roof.height(roof.cells().locate(cells_.lower(i)));
      tops_.push_back(top);
      if (col.values.size() != col.band_cuts.size() + 1) throw DomainError("each band needs a value");
      FixedReal below;
      for (std::size_t j = 0; j <= col.band_cuts.size(); ++j) {
        const FixedReal& upper = j < col.band_cuts.size() ? col.band_cuts[j] : top;
        if (guarded_compare(below, upper) != Ordering::Less) throw DomainError("band cuts must increase within (0, r)");
        mean += BigInt(cells_.length(i).mantissa()) * BigInt((upper - below).mantissa()) * BigInt(col.values[j].mantissa());
        below = upper;
      }
    }
    if (mean != 0) throw DomainError("phase function must have zero mean");
  }

  /// One band per column: f(a, b) depends on the base coordinate only.
  static PhaseFunction base_only(const Roof& roof, Partition cells, const std::vector<FixedReal>& values) {
    std::vector<Column> cols;
    for (const auto& v : values) cols.push_back({{}, {v}});
    return PhaseFunction(roof, std::move(cells), std::move(cols));
  }

  static PhaseFunction zero(const Roof& roof) {
    std::vector<Column> cols(roof.cells().size(), Column{{}, {FixedReal{}}});
    return PhaseFunction(roof, roof.cells(), std::move(cols));
  }

  const Partition& cells() const { return cells_; }
  const std::vector<Column>& columns() const { return columns_; }

  struct Piece {
    std::size_t cell;
    std::size_t band;
    const FixedReal* top;  // upper edge of the band (the roof for the last band)
    const FixedReal* value;
    bool last_band;
  };

  Piece locate(const FlowState& s) const {
    std::size_t i = cells_.locate(s.a);
    const auto& col = columns_[i];
    std::size_t j = 0;
    while (j < col.band_cuts.size()) {
      Side side = side_of(s.b, col.band_cuts[j]);
      if (side == Side::Ambiguous) throw PrecisionExhausted("height ambiguous against a band cut");
      if (side == Side::Below) break;
      ++j;
    }
    bool last = j == col.band_cuts.size();
    return {i, j, last ? &tops_[i] : &col.band_cuts[j], &col.values[j], last};
  }

  const FixedReal& operator()(const FlowState& s) const { return *locate(s).value; }

 private:
  Partition cells_;
  std::vector<Column> columns_;
  std::vector<FixedReal> tops_;
};

}  // namespace ergolab
