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

// Measure-preserving circle maps: rotations and interval exchanges.

#include <concepts>
#include <cstdint>
#include <numeric>
#include <variant>
#include <vector>

#include "ergolab/angle.hpp"
#include "ergolab/circle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"

namespace ergolab {

template <class M>
concept CircleMap = requires(const M& m, const FixedReal& p) {
  { m.apply(p) } -> std::same_as<FixedReal>;
};

template <class M>
concept InvertibleCircleMap = CircleMap<M> && requires(const M& m, const FixedReal& p) {
  { m.apply_inverse(p) } -> std::same_as<FixedReal>;
};

class CircleRotation {
 public:
  explicit CircleRotation(AngleSpec alpha) : alpha_(std::move(alpha)), step_(alpha_.resolved()) {}

  const AngleSpec& angle() const { return alpha_; }
  const FixedReal& step() const { return step_; }
  bool is_ergodic() const { return !alpha_.is_rational(); }

  FixedReal apply(const FixedReal& p) const { return checked(circle_add(p, step_)); }
  FixedReal apply_inverse(const FixedReal& p) const { return checked(circle_sub(p, step_)); }

  /// S^k p for any integer k in one step.
  FixedReal apply_power(const FixedReal& p, std::int64_t k) const {
    return checked((p + step_ * k).frac());
  }

 private:
  static FixedReal checked(FixedReal p) {
    require_margin(p);
    return p;
  }

  AngleSpec alpha_;
  FixedReal step_;
};

/// Interval exchange: cell i of the partition by `lengths` moves, as a block,
/// to slot permutation[i] of the exchanged order (0-based).
class IntervalExchange {
 public:
  IntervalExchange(std::vector<FixedReal> lengths, std::vector<int> permutation)
      : lengths_(std::move(lengths)), permutation_(std::move(permutation)) {
    const std::size_t m = lengths_.size();
    if (m == 0 || permutation_.size() != m) throw DomainError("interval exchange needs one slot per length");
    std::vector<bool> seen(m, false);
    for (int s : permutation_) {
      if (s < 0 || static_cast<std::size_t>(s) >= m || seen[s]) throw DomainError("permutation is not a bijection");
      seen[s] = true;
    }
    Mantissa total = 0;
    for (const auto& l : lengths_) {
      if (guarded_compare(l, FixedReal{}) != Ordering::Greater) throw DomainError("lengths must be positive");
      total += l.mantissa();
    }
    if (total != kUnit) throw DomainError("lengths must sum to exactly 1");

    std::vector<FixedReal> starts(m);
    for (std::size_t i = 1; i < m; ++i) starts[i] = starts[i - 1] + lengths_[i - 1];
    partition_ = Partition(starts);

    std::vector<std::size_t> by_slot(m);
    for (std::size_t i = 0; i < m; ++i) by_slot[permutation_[i]] = i;
    std::vector<FixedReal> image_start(m);
    FixedReal acc;
    for (std::size_t s = 0; s < m; ++s) {
      image_start[by_slot[s]] = acc;
      acc += lengths_[by_slot[s]];
    }
    offsets_.resize(m);
    for (std::size_t i = 0; i < m; ++i) offsets_[i] = image_start[i] - starts[i];

    std::vector<FixedReal> slot_starts(m);
    inverse_offsets_.resize(m);
    for (std::size_t s = 0; s < m; ++s) {
      slot_starts[s] = image_start[by_slot[s]];
      inverse_offsets_[s] = -offsets_[by_slot[s]];
    }
    image_partition_ = Partition(std::move(slot_starts));
  }

  /// Two intervals (beta, 1 - beta) swapped: a rotation by 1 - beta.
  static IntervalExchange two_interval(const FixedReal& beta) {
    return IntervalExchange({beta, fixed_one() - beta}, {1, 0});
  }

  const std::vector<FixedReal>& lengths() const { return lengths_; }
  const std::vector<int>& permutation() const { return permutation_; }
  const Partition& partition() const { return partition_; }

  FixedReal apply(const FixedReal& p) const {
    std::size_t cell = partition_.locate(p);
    FixedReal r = circle_add(p, offsets_[cell]);
    require_margin(r);
    return r;
  }

  IntervalExchange inverse() const {
    const std::size_t m = lengths_.size();
    std::vector<std::size_t> by_slot(m);
    for (std::size_t i = 0; i < m; ++i) by_slot[permutation_[i]] = i;
    std::vector<FixedReal> lengths(m);
    std::vector<int> perm(m);
    for (std::size_t s = 0; s < m; ++s) {
      lengths[s] = lengths_[by_slot[s]];
      perm[s] = static_cast<int>(by_slot[s]);
    }
    return IntervalExchange(std::move(lengths), std::move(perm));
  }

  FixedReal apply_inverse(const FixedReal& p) const {
    std::size_t slot = image_partition_.locate(p);
    FixedReal r = circle_add(p, inverse_offsets_[slot]);
    require_margin(r);
    return r;
  }

 private:
  std::vector<FixedReal> lengths_;
  std::vector<int> permutation_;
  Partition partition_;
  std::vector<FixedReal> offsets_;
  Partition image_partition_;
  std::vector<FixedReal> inverse_offsets_;
};

/// Runtime-selected base automorphism (used by config-driven runs).
class BaseMap {
 public:
  BaseMap(CircleRotation r) : impl_(std::move(r)) {}
  BaseMap(IntervalExchange e) : impl_(std::move(e)) {}

  FixedReal apply(const FixedReal& p) const {
    return std::visit([&](const auto& m) { return m.apply(p); }, impl_);
  }
  FixedReal apply_inverse(const FixedReal& p) const {
    return std::visit([&](const auto& m) { return m.apply_inverse(p); }, impl_);
  }

  bool is_rotation() const { return std::holds_alternative<CircleRotation>(impl_); }
  const CircleRotation* rotation() const { return std::get_if<CircleRotation>(&impl_); }
  const IntervalExchange* exchange() const { return std::get_if<IntervalExchange>(&impl_); }

  /// False for rational rotations (periodic: oracle use only).
  bool is_ergodic_candidate() const {
    if (auto r = rotation()) return r->is_ergodic();
    return true;
  }

 private:
  std::variant<CircleRotation, IntervalExchange> impl_;
};

inline FixedReal rotation_apply(const CircleRotation& map, const FixedReal& p) { return map.apply(p); }
inline FixedReal iet_apply(const IntervalExchange& map, const FixedReal& p) { return map.apply(p); }

}  // namespace ergolab
