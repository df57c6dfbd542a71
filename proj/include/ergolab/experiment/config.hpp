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

// Declarative experiment configs: JSON blocks parsed into typed systems,
// observables and detector parameters. Every failure is a ConfigError
// carrying the JSON path of the offending field.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergolab/angle.hpp"
#include "ergolab/circle.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/flow_recurrence.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/phase_function.hpp"
#include "ergolab/skew_product.hpp"
#include "ergolab/special_flow.hpp"
#include "ergolab/step_cocycle.hpp"
#include "ergolab/torus.hpp"
#include "ergolab/trig_polynomial.hpp"

namespace ergolab::experiment {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void fail(std::string_view path, std::string_view what) {
  throw ConfigError(std::string(path) + ": " + std::string(what));
}

inline std::string join(std::string_view path, std::string_view key) {
  return std::string(path) + "." + std::string(key);
}

inline std::string join(std::string_view path, std::size_t index) {
  return std::string(path) + "[" + std::to_string(index) + "]";
}

inline const json& field(const json& obj, std::string_view key, std::string_view path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "missing");
  return *it;
}

inline const json* optional_field(const json& obj, std::string_view key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline const json& array_field(const json& obj, std::string_view key, std::string_view path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) fail(join(path, key), "expected an array");
  return v;
}

inline std::string string_field(const json& obj, std::string_view key, std::string_view path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

/// Reals are decimal strings, "p/q" strings, or JSON numbers (re-read from
/// their shortest decimal form so 0.1 stays exactly one tenth).
inline FixedReal to_real(const json& v, std::string_view path) {
  try {
    if (v.is_string()) return FixedReal::parse(v.get<std::string>());
    if (v.is_number_integer()) return FixedReal::from_int(v.get<std::int64_t>());
    if (v.is_number()) return FixedReal::parse(v.dump());
  } catch (const Error& e) {
    fail(path, e.what());
  }
  fail(path, "expected a real number");
}

inline std::int64_t to_int(const json& v, std::string_view path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

inline double to_double(const json& v, std::string_view path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return to_real(v, path).to_double();
  fail(path, "expected a number");
}

inline FixedReal real_field(const json& obj, std::string_view key, std::string_view path) {
  return to_real(field(obj, key, path), join(path, key));
}

inline std::int64_t int_field(const json& obj, std::string_view key, std::string_view path) {
  return to_int(field(obj, key, path), join(path, key));
}

inline std::int64_t positive_int_field(const json& obj, std::string_view key, std::string_view path) {
  std::int64_t v = int_field(obj, key, path);
  if (v < 1) fail(join(path, key), "must be a positive integer");
  return v;
}

inline FixedReal positive_real_field(const json& obj, std::string_view key, std::string_view path) {
  FixedReal v = real_field(obj, key, path);
  if (guarded_compare(v, FixedReal{}) != Ordering::Greater) fail(join(path, key), "must be positive");
  return v;
}

inline FixedReal unit_point_field(const json& obj, std::string_view key, std::string_view path) {
  FixedReal v = real_field(obj, key, path);
  if (guarded_compare(v, FixedReal{}) == Ordering::Less || side_of(v, fixed_one()) != Side::Below)
    fail(join(path, key), "must lie in [0, 1)");
  return v;
}

inline std::vector<FixedReal> real_list(const json& obj, std::string_view key, std::string_view path) {
  const json& arr = array_field(obj, key, path);
  std::vector<FixedReal> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(to_real(arr[i], join(join(path, key), i)));
  return out;
}

inline AngleSpec angle_field(const json& obj, std::string_view key, std::string_view path) {
  std::string text = string_field(obj, key, path);
  try {
    return AngleSpec::parse(text);
  } catch (const Error& e) {
    fail(join(path, key), e.what());
  }
}

/// Runs a constructor, turning domain failures into config errors at `path`.
template <class Fn>
auto build(std::string_view path, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

}  // namespace detail

/// A base automorphism block: {"kind": "rotation" | "iet", ...}.
inline BaseMap parse_base_map(const json& block, std::string_view path, std::vector<std::string>& warnings) {
  std::string kind = detail::string_field(block, "kind", path);
  if (kind == "rotation") {
    AngleSpec alpha = detail::angle_field(block, "alpha", path);
    if (alpha.is_rational())
      warnings.push_back(std::string(path) + ": rational angle " + alpha.to_string() + " is periodic (oracle mode)");
    return BaseMap(CircleRotation(std::move(alpha)));
  }
  if (kind == "iet") {
    auto lengths = detail::real_list(block, "lengths", path);
    const json& perm = detail::array_field(block, "permutation", path);
    std::vector<int> slots;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      // Config permutations are 1-based: interval i goes to slot permutation[i].
      slots.push_back(static_cast<int>(detail::to_int(perm[i], detail::join(detail::join(path, "permutation"), i)) - 1));
    }
    return detail::build(path, [&] { return BaseMap(IntervalExchange(std::move(lengths), std::move(slots))); });
  }
  detail::fail(detail::join(path, "kind"), "unknown base map kind '" + kind + "'");
}

inline Roof parse_roof(const json& block, std::string_view path) {
  auto heights = detail::real_list(block, "heights", path);
  std::vector<FixedReal> cuts{FixedReal{}};
  if (const json* b = detail::optional_field(block, "breakpoints")) {
    if (!b->is_array()) detail::fail(detail::join(path, "breakpoints"), "expected an array");
    cuts = detail::real_list(block, "breakpoints", path);
  }
  return detail::build(path, [&] { return Roof(Partition(std::move(cuts)), std::move(heights)); });
}

struct SystemModel {
  std::string kind;  // rotation, iet, special_flow, torus_winding, skew_product
  std::optional<BaseMap> base;
  std::optional<Roof> roof;
  std::optional<TorusWinding> winding;
  std::optional<BaseMap> fiber;
  std::vector<std::string> warnings;

  bool is_cascade() const { return kind == "rotation" || kind == "iet"; }
};

inline SystemModel parse_system(const json& block) {
  const std::string path = "system";
  SystemModel m;
  m.kind = detail::string_field(block, "kind", path);
  if (m.is_cascade()) {
    m.base = parse_base_map(block, path, m.warnings);
  } else if (m.kind == "special_flow") {
    m.base = parse_base_map(detail::field(block, "base", path), "system.base", m.warnings);
    m.roof = parse_roof(detail::field(block, "roof", path), "system.roof");
  } else if (m.kind == "torus_winding") {
    AngleSpec gamma = detail::angle_field(block, "gamma", path);
    if (gamma.is_rational())
      m.warnings.push_back("system.gamma: rational slope " + gamma.to_string() + " gives a periodic winding (oracle mode)");
    m.winding.emplace(std::move(gamma));
  } else if (m.kind == "skew_product") {
    m.base = parse_base_map(detail::field(block, "base", path), "system.base", m.warnings);
    m.fiber = parse_base_map(detail::field(block, "fiber", path), "system.fiber", m.warnings);
  } else {
    detail::fail("system.kind", "unknown system kind '" + m.kind + "'");
  }
  return m;
}

struct CocycleModel {
  std::string kind;  // step, phase, trig, zero
  std::optional<IntegerCocycle> step;
  std::optional<PhaseFunction> phase;
  std::optional<TrigPolynomial> trig;
};

inline CocycleModel parse_cocycle(const json& block, const SystemModel& system) {
  const std::string path = "cocycle";
  CocycleModel c;
  c.kind = detail::string_field(block, "kind", path);
  const bool flow = system.kind == "special_flow";
  const bool winding = system.kind == "torus_winding";
  if (c.kind == "zero") {
    if (flow) c.phase = PhaseFunction::zero(*system.roof);
    else if (winding) c.trig.emplace(std::vector<TrigMode>{});
    else c.step = IntegerCocycle::zero();
    return c;
  }
  if (c.kind == "step") {
    if (flow || winding) detail::fail("cocycle.kind", "a step cocycle needs a cascade or skew product system");
    std::vector<FixedReal> cuts{FixedReal{}};
    if (detail::optional_field(block, "breakpoints")) cuts = detail::real_list(block, "breakpoints", path);
    const json& vals = detail::array_field(block, "values", path);
    std::vector<std::int64_t> values;
    for (std::size_t i = 0; i < vals.size(); ++i) values.push_back(detail::to_int(vals[i], detail::join("cocycle.values", i)));
    c.step = detail::build(path, [&] { return IntegerCocycle(Partition(std::move(cuts)), std::move(values)); });
    return c;
  }
  if (c.kind == "phase") {
    if (!flow) detail::fail("cocycle.kind", "a phase function needs a special_flow system");
    std::vector<FixedReal> cells{FixedReal{}};
    if (detail::optional_field(block, "cells")) cells = detail::real_list(block, "cells", path);
    const json& cols = detail::array_field(block, "columns", path);
    std::vector<PhaseFunction::Column> columns;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string cp = detail::join("cocycle.columns", i);
      PhaseFunction::Column col;
      if (detail::optional_field(cols[i], "cuts")) col.band_cuts = detail::real_list(cols[i], "cuts", cp);
      col.values = detail::real_list(cols[i], "values", cp);
      columns.push_back(std::move(col));
    }
    c.phase = detail::build(path, [&] { return PhaseFunction(*system.roof, Partition(std::move(cells)), std::move(columns)); });
    return c;
  }
  if (c.kind == "trig") {
    if (!winding) detail::fail("cocycle.kind", "a trig polynomial needs a torus_winding system");
    const json& modes = detail::array_field(block, "modes", path);
    std::vector<TrigMode> out;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const std::string mode_path = detail::join("cocycle.modes", i);
      TrigMode m;
      m.j = detail::int_field(modes[i], "j", mode_path);
      m.k = detail::int_field(modes[i], "k", mode_path);
      if (const json* v = detail::optional_field(modes[i], "cos")) m.cos_amp = detail::to_double(*v, detail::join(mode_path, "cos"));
      if (const json* v = detail::optional_field(modes[i], "sin")) m.sin_amp = detail::to_double(*v, detail::join(mode_path, "sin"));
      out.push_back(m);
    }
    c.trig = detail::build(path, [&] { return TrigPolynomial(std::move(out)); });
    return c;
  }
  detail::fail("cocycle.kind", "unknown cocycle kind '" + c.kind + "'");
}

inline FlowState parse_flow_state(const json& block, std::string_view path, const Roof& roof) {
  FlowState s{detail::unit_point_field(block, "a", path), detail::real_field(block, "b", path)};
  if (guarded_compare(s.b, FixedReal{}) == Ordering::Less || side_of(s.b, roof.height_at(s.a)) != Side::Below)
    detail::fail(path, "state must satisfy 0 <= b < r(a)");
  return s;
}

inline PhaseTargetSet parse_phase_target(const json& v, std::string_view path) {
  if (v.is_string() && v.get<std::string>() == "whole") return PhaseTargetSet::whole();
  if (!v.is_array()) detail::fail(path, "expected \"whole\" or an array of rectangles");
  std::vector<PhaseRectangle> rects;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string rp = detail::join(path, i);
    PhaseRectangle r{detail::real_field(v[i], "a_lo", rp), detail::real_field(v[i], "a_hi", rp), FixedReal{}, std::nullopt};
    if (detail::optional_field(v[i], "h_lo")) r.h_lo = detail::real_field(v[i], "h_lo", rp);
    if (detail::optional_field(v[i], "h_hi")) r.h_hi = detail::real_field(v[i], "h_hi", rp);
    rects.push_back(std::move(r));
  }
  return detail::build(path, [&] { return PhaseTargetSet(std::move(rects)); });
}

inline IntervalSet parse_interval_target(const json& v, std::string_view path) {
  if (v.is_string() && v.get<std::string>() == "whole") return IntervalSet::whole();
  if (!v.is_array()) detail::fail(path, "expected \"whole\" or an array of [lo, hi] pairs");
  std::vector<Interval> parts;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string ip = detail::join(path, i);
    if (!v[i].is_array() || v[i].size() != 2) detail::fail(ip, "expected a [lo, hi] pair");
    parts.push_back({detail::to_real(v[i][0], ip + "[0]"), detail::to_real(v[i][1], ip + "[1]")});
  }
  return detail::build(path, [&] { return IntervalSet(std::move(parts)); });
}

inline std::vector<Rectangle> parse_rectangles(const json& v, std::string_view path) {
  if (!v.is_array()) detail::fail(path, "expected an array of rectangles");
  std::vector<Rectangle> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string rp = detail::join(path, i);
    out.push_back({detail::real_field(v[i], "x_lo", rp), detail::real_field(v[i], "x_hi", rp),
                   detail::real_field(v[i], "y_lo", rp), detail::real_field(v[i], "y_hi", rp)});
  }
  return out;
}

struct Sampling {
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

inline Sampling parse_sampling(const json& config, std::int64_t min_samples) {
  const json* block = detail::optional_field(config, "sampling");
  if (!block) detail::fail("sampling", "required by this detector");
  Sampling s;
  s.samples = detail::positive_int_field(*block, "samples", "sampling");
  if (s.samples < min_samples) detail::fail("sampling.samples", "must be at least " + std::to_string(min_samples));
  const json& seed = detail::field(*block, "seed", "sampling");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
    detail::fail("sampling.seed", "expected a non-negative integer");
  s.seed = seed.get<std::uint64_t>();
  return s;
}

}  // namespace ergolab::experiment
