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

// Ready-made experiment configs, one per recurrence claim under study.

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace ergolab::experiment {

struct Preset {
  std::string name;
  std::string summary;
  nlohmann::json config;
};

inline std::vector<Preset> presets() {
  using nlohmann::json;
  const json golden = {{"kind", "rotation"}, {"alpha", "preset:golden"}};
  const json plus_minus = {{"kind", "step"}, {"breakpoints", {"0", "1/2"}}, {"values", {1, -1}}};
  const json unit_flow = {{"kind", "special_flow"},
                          {"base", golden},
                          {"roof", {{"breakpoints", {"0"}}, {"heights", {"1"}}}}};
  const json plus_minus_phase = {{"kind", "phase"},
                                 {"cells", {"0", "1/2"}},
                                 {"columns", {{{"values", {"1"}}}, {{"values", {"-1"}}}}}};
  auto out = [](const std::string& name) { return json{{"directory", "runs/" + name}, {"formats", {"csv", "json"}}}; };

  std::vector<Preset> list;
  list.push_back({"krygin-atkinson",
                  "zero Birkhoff sums of the +-1 step over the golden rotation",
                  {{"system", golden},
                   {"cocycle", plus_minus},
                   {"detector", {{"kind", "zero_sums"}, {"x", "0.1"}, {"N", 1000000}}},
                   {"output", out("krygin-atkinson")}}});
  list.push_back({"shneiberg",
                  "zero sums that are also near returns of the base orbit",
                  {{"system", golden},
                   {"cocycle", plus_minus},
                   {"detector", {{"kind", "joint_zero_returns"}, {"x", "0.1"}, {"N", 1000000}, {"eps", "0.001"}}},
                   {"output", out("shneiberg")}}});
  list.push_back({"theorem-a",
                  "zeros of sigma for a unit-roof special flow landing in a target set",
                  {{"system", unit_flow},
                   {"cocycle", plus_minus_phase},
                   {"detector",
                    {{"kind", "flow_zero_set_returns"},
                     {"x", {{"a", "0.1"}, {"b", "0"}}},
                     {"T", 10000},
                     {"target", {{{"a_lo", "0"}, {"a_hi", "1/2"}}}}}},
                   {"output", out("theorem-a")}}});
  list.push_back({"theorem-b-flow",
                  "zeros of sigma with near returns for a special flow",
                  {{"system", unit_flow},
                   {"cocycle", plus_minus_phase},
                   {"detector",
                    {{"kind", "flow_zero_near_returns"}, {"x", {{"a", "0.1"}, {"b", "0"}}}, {"T", 10000}, {"eps", "0.05"}}},
                   {"output", out("theorem-b-flow")}}});
  list.push_back({"theorem-b-winding",
                  "zeros of sigma with near returns for the sqrt(2) torus winding",
                  {{"system", {{"kind", "torus_winding"}, {"gamma", "preset:sqrt2"}}},
                   {"cocycle", {{"kind", "trig"}, {"modes", {{{"j", 1}, {"k", 0}, {"cos", 1.0}, {"sin", 0.0}}}}}},
                   {"detector",
                    {{"kind", "flow_zero_near_returns"}, {"x", {{"x", "0"}, {"y", "0"}}}, {"T", 1000}, {"eps", "0.05"}}},
                   {"output", out("theorem-b-winding")}}});
  list.push_back({"theorem-c-induced",
                  "first-return map to [0, 1/2) for the golden rotation: Kac and zero mean",
                  {{"system", golden},
                   {"cocycle", plus_minus},
                   {"detector", {{"kind", "induced"}, {"target", json::array({json::array({"0", "1/2"})})}}},
                   {"sampling", {{"samples", 100000}, {"seed", 20240601}}},
                   {"output", out("theorem-c-induced")}}});
  list.push_back({"theorem-d-weiss",
                  "probability that |S_n| exceeds eps n for the golden rotation",
                  {{"system", golden},
                   {"cocycle", plus_minus},
                   {"detector", {{"kind", "weiss"}, {"n_list", {100, 1000, 10000}}, {"eps", "0.05"}}},
                   {"sampling", {{"samples", 2000}, {"seed", 20240602}}},
                   {"output", out("theorem-d-weiss")}}});
  list.push_back({"skew-construct",
                  "skew product of the golden rotation with a sqrt(2) fiber rotation",
                  {{"system",
                    {{"kind", "skew_product"},
                     {"base", golden},
                     {"fiber", {{"kind", "rotation"}, {"alpha", "preset:sqrt2"}}}}},
                   {"cocycle", plus_minus},
                   {"detector",
                    {{"kind", "skew_stats"},
                     {"start", {{"x", "0.1"}, {"y", "0.2"}}},
                     {"N", 100000},
                     {"observables",
                      {{{"x_lo", "0"}, {"x_hi", "1"}, {"y_lo", "0"}, {"y_hi", "1"}},
                       {{"x_lo", "0"}, {"x_hi", "1/2"}, {"y_lo", "0"}, {"y_hi", "1"}},
                       {{"x_lo", "0"}, {"x_hi", "1/2"}, {"y_lo", "0"}, {"y_hi", "1/2"}}}}}},
                   {"output", out("skew-construct")}}});
  return list;
}

inline const Preset* find_preset(const std::string& name) {
  static const std::vector<Preset> all = presets();
  for (const auto& p : all)
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace ergolab::experiment
