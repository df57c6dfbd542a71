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
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "ergolab/fixed_real.hpp"

namespace ergolab {

/// One detected event: an integer step n (cascades) or a real time t (flows).
struct ReturnRecord {
  std::variant<std::int64_t, FixedReal> time;
  FixedReal value;                     // S_n(x) or sigma(t, x) at that time
  std::optional<FixedReal> distance;   // to the starting point
  std::optional<bool> in_set;          // membership of the target set

  std::int64_t step() const { return std::get<std::int64_t>(time); }
  const FixedReal& flow_time() const { return std::get<FixedReal>(time); }
};

/// CSV with columns time,value,distance,in_set. Absent fields are empty.
inline void write_records_csv(std::ostream& os, const std::vector<ReturnRecord>& records, int digits = 20) {
  os << "time,value,distance,in_set\n";
  for (const auto& r : records) {
    if (auto n = std::get_if<std::int64_t>(&r.time)) os << *n;
    else os << std::get<FixedReal>(r.time).to_decimal(digits);
    os << ',' << r.value.to_decimal(digits) << ',';
    if (r.distance) os << r.distance->to_decimal(digits);
    os << ',';
    if (r.in_set) os << (*r.in_set ? 1 : 0);
    os << '\n';
  }
}

}  // namespace ergolab
