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

// Experiment execution: validated configs become a single detector run whose
// result files and manifest are written together under one directory.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "ergolab/cascade_recurrence.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/experiment/config.hpp"
#include "ergolab/fixed_real.hpp"
#include "ergolab/flow_recurrence.hpp"
#include "ergolab/induced.hpp"
#include "ergolab/measure_check.hpp"
#include "ergolab/return_record.hpp"
#include "ergolab/sigma.hpp"
#include "ergolab/skew_product.hpp"
#include "ergolab/special_flow.hpp"
#include "ergolab/weiss.hpp"

namespace ergolab::experiment {

inline constexpr const char* kToolName = "ergolab";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kCsvDigits = 20;
inline constexpr const char* kOutputRootEnv = "ERGOLAB_OUTPUT_ROOT";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitPrecision = 2, kExitBudget = 3 };

/// Result files (name to content) plus a JSON summary block.
struct Artifacts {
  std::map<std::string, std::string> files;
  json summary = json::object();
};

struct Experiment {
  json config;
  std::string digest;
  std::string detector;
  std::filesystem::path output_dir;
  std::vector<std::string> formats;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> warnings;
  std::function<Artifacts()> run;

  bool wants(std::string_view format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
  }
};

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

/// Digest of the canonical form: compact dump with sorted keys.
inline std::string config_digest(const json& config) { return sha256_hex(config.dump()); }

namespace detail {

inline std::string real_text(const FixedReal& v) { return v.to_decimal(kCsvDigits); }

inline std::string double_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

inline std::string records_csv(const std::vector<ReturnRecord>& records) {
  std::ostringstream os;
  write_records_csv(os, records, kCsvDigits);
  return os.str();
}

inline json histogram_json(const HistogramCheck& h) {
  return {{"samples", h.samples}, {"statistic", h.statistic}, {"tolerance", h.tolerance}, {"passed", h.passed()}};
}

[[noreturn]] inline void mismatch(const std::string& detector, const std::string& need) {
  fail("detector.kind", "'" + detector + "' needs " + need);
}

inline void require_cascade(const SystemModel& s, const std::string& detector) {
  if (!s.is_cascade()) mismatch(detector, "a rotation or iet system");
}

inline const IntegerCocycle& require_step(const std::optional<CocycleModel>& c, const std::string& detector) {
  if (!c || !c->step) mismatch(detector, "a step or zero cocycle");
  return *c->step;
}

}  // namespace detail

/// Validates a config and binds its detector. Throws ConfigError.
inline Experiment prepare(const json& config) {
  using namespace detail;
  if (!config.is_object()) fail("config", "expected a JSON object");
  for (const auto& [key, _] : config.items()) {
    if (key != "system" && key != "cocycle" && key != "detector" && key != "sampling" && key != "output")
      fail(key, "unknown top-level block");
  }
  Experiment ex;
  ex.config = config;
  ex.digest = config_digest(config);

  SystemModel system = parse_system(field(config, "system", "config"));
  ex.warnings = system.warnings;
  std::optional<CocycleModel> cocycle;
  if (const json* c = optional_field(config, "cocycle")) cocycle = parse_cocycle(*c, system);

  const json& out = field(config, "output", "config");
  ex.output_dir = string_field(out, "directory", "output");
  if (ex.output_dir.empty()) fail("output.directory", "must not be empty");
  ex.formats = {"csv", "json"};
  if (const json* f = optional_field(out, "formats")) {
    if (!f->is_array()) fail("output.formats", "expected an array");
    ex.formats.clear();
    for (std::size_t i = 0; i < f->size(); ++i) {
      const json& v = (*f)[i];
      if (!v.is_string()) fail(join("output.formats", i), "expected a string");
      std::string name = v.get<std::string>();
      if (name != "csv" && name != "json" && name != "samples") fail(join("output.formats", i), "unknown format '" + name + "'");
      ex.formats.push_back(name);
    }
  }

  const json& det = field(config, "detector", "config");
  const std::string kind = string_field(det, "kind", "detector");
  ex.detector = kind;
  const std::string dp = "detector";

  if (kind == "zero_sums" || kind == "joint_zero_returns" || kind == "near_returns") {
    require_cascade(system, kind);
    BaseMap base = *system.base;
    FixedReal x = unit_point_field(det, "x", dp);
    std::int64_t n = positive_int_field(det, "N", dp);
    if (kind == "near_returns") {
      FixedReal eps = positive_real_field(det, "eps", dp);
      ex.run = [=] {
        Artifacts a;
        auto times = near_returns(base, x, n, eps);
        std::string csv = "n\n";
        for (auto t : times) csv += std::to_string(t) + "\n";
        a.files["returns.csv"] = csv;
        a.summary["count"] = times.size();
        return a;
      };
    } else {
      IntegerCocycle f = require_step(cocycle, kind);
      std::optional<FixedReal> eps;
      if (kind == "joint_zero_returns") eps = positive_real_field(det, "eps", dp);
      ex.run = [=] {
        Artifacts a;
        auto recs = eps ? joint_zero_returns(base, f, x, n, *eps) : find_zero_sums(base, f, x, n);
        a.files["records.csv"] = records_csv(recs);
        a.summary["count"] = recs.size();
        if (!recs.empty()) {
          a.summary["first_time"] = recs.front().step();
          a.summary["last_time"] = recs.back().step();
          auto best = std::min_element(recs.begin(), recs.end(), [](const ReturnRecord& l, const ReturnRecord& r) {
            return l.distance->mantissa() < r.distance->mantissa();
          });
          a.summary["min_distance"] = real_text(*best->distance);
          a.summary["min_distance_time"] = best->step();
        }
        return a;
      };
    }
  } else if (kind == "flow_zero_set_returns" || kind == "sigma_profile" ||
             (kind == "flow_zero_near_returns" && system.kind == "special_flow")) {
    if (system.kind != "special_flow") mismatch(kind, "a special_flow system");
    if (!cocycle || !cocycle->phase) mismatch(kind, "a phase or zero cocycle");
    SpecialFlow<BaseMap> flow(*system.roof, *system.base);
    PhaseFunction f = *cocycle->phase;
    FlowState x = parse_flow_state(field(det, "x", dp), "detector.x", flow.roof());
    FixedReal t_end = positive_real_field(det, "T", dp);
    if (kind == "sigma_profile") {
      ex.run = [=] {
        Artifacts a;
        SigmaProfile p = sigma_profile(flow, f, x, t_end);
        std::ostringstream os;
        p.write_csv(os, kCsvDigits);
        a.files["profile.csv"] = os.str();
        a.summary["nodes"] = p.nodes().size();
        return a;
      };
    } else if (kind == "flow_zero_set_returns") {
      PhaseTargetSet target = parse_phase_target(field(det, "target", dp), "detector.target");
      ex.run = [=] {
        Artifacts a;
        auto recs = flow_zero_set_returns(flow, f, x, t_end, target);
        a.files["records.csv"] = records_csv(recs);
        a.summary["count"] = recs.size();
        a.summary["target_measure"] = real_text(target.measure(flow.roof()));
        return a;
      };
    } else {
      FixedReal eps = positive_real_field(det, "eps", dp);
      ex.run = [=] {
        Artifacts a;
        auto recs = flow_zero_near_returns(flow, f, x, t_end, eps);
        a.files["records.csv"] = records_csv(recs);
        a.summary["count"] = recs.size();
        return a;
      };
    }
  } else if (kind == "flow_zero_near_returns") {
    if (system.kind != "torus_winding") mismatch(kind, "a special_flow or torus_winding system");
    if (!cocycle || !cocycle->trig) mismatch(kind, "a trig or zero cocycle");
    TorusWinding w = *system.winding;
    TrigPolynomial f = *cocycle->trig;
    const json& xj = field(det, "x", dp);
    TorusPoint p{unit_point_field(xj, "x", "detector.x"), unit_point_field(xj, "y", "detector.x")};
    double t_end = to_double(field(det, "T", dp), "detector.T");
    if (!(t_end > 0.0)) fail("detector.T", "must be positive");
    FixedReal eps = positive_real_field(det, "eps", dp);
    WindingScanOptions opts;
    if (const json* g = optional_field(det, "grid_step")) {
      opts.grid_step = to_double(*g, "detector.grid_step");
      if (!(opts.grid_step > 0.0)) fail("detector.grid_step", "must be positive");
    }
    ex.run = [=] {
      Artifacts a;
      auto recs = flow_zero_near_returns(w, f, p, t_end, eps, opts);
      a.files["records.csv"] = records_csv(recs);
      a.summary["count"] = recs.size();
      a.summary["grid_step"] = opts.grid_step > 0.0 ? opts.grid_step : default_grid_step(w, f);
      return a;
    };
  } else if (kind == "weiss") {
    require_cascade(system, kind);
    BaseMap base = *system.base;
    IntegerCocycle f = require_step(cocycle, kind);
    const json& nl = array_field(det, "n_list", dp);
    std::vector<std::int64_t> n_list;
    for (std::size_t i = 0; i < nl.size(); ++i) {
      std::int64_t v = to_int(nl[i], join("detector.n_list", i));
      if (v < 1) fail(join("detector.n_list", i), "must be a positive integer");
      n_list.push_back(v);
    }
    if (n_list.empty()) fail("detector.n_list", "must not be empty");
    FixedReal eps = positive_real_field(det, "eps", dp);
    Sampling s = parse_sampling(config, 100);
    ex.seed = s.seed;
    ex.run = [=] {
      Artifacts a;
      auto points = weiss_estimate(base, f, n_list, eps, s.samples, s.seed);
      std::string csv = "n,probability\n";
      json rows = json::array();
      for (const auto& w : points) {
        csv += std::to_string(w.n) + "," + real_text(w.probability_exact()) + "\n";
        rows.push_back({{"n", w.n},
                        {"exceed_count", w.exceed_count},
                        {"probability", w.probability()},
                        {"zero_visits", w.zero_visits},
                        {"samples_with_zero", w.samples_with_zero}});
      }
      a.files["weiss.csv"] = csv;
      a.summary["points"] = rows;
      a.summary["samples"] = s.samples;
      return a;
    };
  } else if (kind == "induced") {
    require_cascade(system, kind);
    BaseMap base = *system.base;
    IntegerCocycle f = require_step(cocycle, kind);
    IntervalSet target = parse_interval_target(field(det, "target", dp), "detector.target");
    std::int64_t budget = kDefaultReturnBudget;
    if (optional_field(det, "budget")) budget = positive_int_field(det, "budget", dp);
    Sampling s = parse_sampling(config, 100);
    ex.seed = s.seed;
    const bool keep_samples = ex.wants("samples");
    ex.run = [=] {
      Artifacts a;
      std::vector<InducedSample> kept;
      std::function<void(const InducedSample&)> sink;
      if (keep_samples) sink = [&](const InducedSample& x) { kept.push_back(x); };
      InducedStats st = induced_checks(base, f, target, s.samples, s.seed, budget, sink);
      std::string csv = "quantity,value,std_error\n";
      csv += "samples," + std::to_string(st.samples) + ",\n";
      csv += "censored," + std::to_string(st.censored) + ",\n";
      csv += "mean_n," + double_text(st.mean_n) + "," + double_text(st.se_n) + "\n";
      csv += "mean_f_tilde," + double_text(st.mean_f_tilde) + "," + double_text(st.se_f_tilde) + "\n";
      csv += "kac_ratio," + double_text(st.kac_ratio()) + "," + double_text(st.se_n * st.target_measure) + "\n";
      a.files["induced.csv"] = csv;
      a.summary = {{"samples", st.samples},   {"censored", st.censored},     {"mean_n", st.mean_n},
                   {"se_n", st.se_n},         {"mean_f_tilde", st.mean_f_tilde}, {"se_f_tilde", st.se_f_tilde},
                   {"target_measure", real_text(target.measure())}, {"kac_ratio", st.kac_ratio()}};
      if (const CircleRotation* rot = base.rotation()) {
        InducedExact exact = induced_exact(*rot, f, target, budget);
        a.summary["exact"] = {{"cells", exact.cells.size()},
                              {"mean_n", real_text(exact.mean_n)},
                              {"mean_f_tilde", real_text(exact.mean_f_tilde)}};
      }
      if (keep_samples) {
        std::string rows = "x,n,return_point,f_tilde\n";
        for (const auto& x : kept)
          rows += real_text(x.x) + "," + std::to_string(x.n) + "," + real_text(x.return_point) + "," +
                  std::to_string(x.f_tilde) + "\n";
        a.files["samples.csv"] = rows;
      }
      return a;
    };
  } else if (kind == "skew_stats") {
    if (system.kind != "skew_product") mismatch(kind, "a skew_product system");
    SkewProduct<BaseMap, BaseMap> r(*system.base, *system.fiber, require_step(cocycle, kind));
    const json& sj = field(det, "start", dp);
    ProductState s0{unit_point_field(sj, "x", "detector.start"), unit_point_field(sj, "y", "detector.start")};
    std::int64_t n = positive_int_field(det, "N", dp);
    std::vector<Rectangle> obs{{FixedReal{}, fixed_one(), FixedReal{}, fixed_one()}};
    if (const json* o = optional_field(det, "observables")) obs = parse_rectangles(*o, "detector.observables");
    ex.run = [=] {
      Artifacts a;
      SkewOrbitStats st = skew_orbit_stats(r, s0, n, obs);
      std::string csv = "observable,mean,std_error\n";
      json rows = json::array();
      for (std::size_t i = 0; i < st.averages.size(); ++i) {
        csv += std::to_string(i) + "," + double_text(st.averages[i].mean) + "," + double_text(st.averages[i].std_error) + "\n";
        rows.push_back({{"mean", st.averages[i].mean}, {"std_error", st.averages[i].std_error}});
      }
      a.files["skew.csv"] = csv;
      a.summary = {{"steps", st.steps},
                   {"averages", rows},
                   {"total_displacement", st.total_displacement},
                   {"final_state", {{"x", real_text(st.final_state.x)}, {"y", real_text(st.final_state.y)}}}};
      return a;
    };
  } else if (kind == "measure_check") {
    Sampling s = parse_sampling(config, 100);
    ex.seed = s.seed;
    double confidence = 0.999;
    if (const json* c = optional_field(det, "confidence")) confidence = to_double(*c, "detector.confidence");
    if (!(confidence > 0.0 && confidence < 1.0)) fail("detector.confidence", "must lie in (0, 1)");
    std::function<HistogramCheck()> check;
    if (system.is_cascade()) {
      BaseMap base = *system.base;
      check = [=] { return histogram_check(base, s.samples, s.seed, 400, confidence); };
    } else if (system.kind == "special_flow") {
      SpecialFlow<BaseMap> flow(*system.roof, *system.base);
      FixedReal t = real_field(det, "t", dp);
      if (guarded_compare(t, FixedReal{}) == Ordering::Less) fail("detector.t", "must be non-negative");
      check = [=] { return histogram_check(flow, t, s.samples, s.seed, 20, confidence); };
    } else if (system.kind == "skew_product") {
      SkewProduct<BaseMap, BaseMap> r(*system.base, *system.fiber, require_step(cocycle, kind));
      check = [=] { return histogram_check(r, s.samples, s.seed, 20, confidence); };
    } else {
      mismatch(kind, "a rotation, iet, special_flow or skew_product system");
    }
    ex.run = [=] {
      Artifacts a;
      HistogramCheck h = check();
      a.files["histogram.csv"] = "samples,statistic,tolerance,passed\n" + std::to_string(h.samples) + "," +
                                 double_text(h.statistic) + "," + double_text(h.tolerance) + "," +
                                 (h.passed() ? "1" : "0") + "\n";
      a.summary = histogram_json(h);
      return a;
    };
  } else {
    fail("detector.kind", "unknown detector kind '" + kind + "'");
  }
  return ex;
}

/// Config validation as a boolean plus diagnostics.
struct Validation {
  bool ok = false;
  std::string error;
  std::vector<std::string> warnings;
};

inline Validation validate(const json& config) {
  Validation v;
  try {
    Experiment ex = prepare(config);
    v.ok = true;
    v.warnings = ex.warnings;
  } catch (const ConfigError& e) {
    v.error = e.what();
  }
  return v;
}

struct RunOptions {
  /// Prefix for relative output directories; defaults to $ERGOLAB_OUTPUT_ROOT.
  std::optional<std::filesystem::path> output_root;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::filesystem::path directory;  // empty when nothing was written
  json manifest;
  std::string message;
};

namespace detail {

inline std::filesystem::path resolve_output(const std::filesystem::path& dir, const RunOptions& opts) {
  if (dir.is_absolute()) return dir;
  if (opts.output_root) return *opts.output_root / dir;
  if (const char* env = std::getenv(kOutputRootEnv); env && *env) return std::filesystem::path(env) / dir;
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << content;
  if (!os) throw Error("failed writing " + path.string());
}

inline json precision_block() {
  return {{"unit", std::to_string(kRadixCofactor) + " * 2^" + std::to_string(kScaleBits)},
          {"fraction_bits", kScaleBits},
          {"radix_cofactor", kRadixCofactor},
          {"error_margin_ulps", std::to_string(kDefaultErrMargin)},
          {"csv_decimal_digits", kCsvDigits}};
}

}  // namespace detail

/// Validates, runs and persists one experiment. Config errors write nothing;
/// precision and budget failures write a manifest recording the failure.
inline RunOutcome run_experiment(const json& config, const RunOptions& opts = {}) {
  RunOutcome outcome;
  Experiment ex;
  try {
    ex = prepare(config);
  } catch (const ConfigError& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  }

  json manifest = {{"tool", kToolName},
                   {"version", kToolVersion},
                   {"config_digest", ex.digest},
                   {"detector", ex.detector},
                   {"precision", detail::precision_block()},
                   {"warnings", ex.warnings}};
  if (ex.seed) manifest["seed"] = *ex.seed;

  const auto start = std::chrono::steady_clock::now();
  std::optional<Artifacts> artifacts;
  try {
    artifacts = ex.run();
    manifest["status"] = "ok";
  } catch (const PrecisionExhausted& e) {
    outcome.exit_code = kExitPrecision;
    manifest["status"] = "precision_exhausted";
    manifest["error"] = {{"message", e.what()}};
    if (e.step) manifest["error"]["step"] = *e.step;
    outcome.message = e.what();
  } catch (const BudgetExceeded& e) {
    outcome.exit_code = kExitBudget;
    manifest["status"] = "budget_exceeded";
    manifest["error"] = {{"message", e.what()}};
    outcome.message = e.what();
  } catch (const DomainError& e) {
    // Inputs that parse but violate a detector hypothesis, e.g. f(x) = 0.
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest["duration_seconds"] = seconds;
  manifest["exit_code"] = outcome.exit_code;

  const std::filesystem::path dir = detail::resolve_output(ex.output_dir, opts);
  std::filesystem::create_directories(dir);
  std::vector<std::string> files{"config.json"};
  detail::write_file(dir / "config.json", ex.config.dump(2) + "\n");
  if (artifacts) {
    for (const auto& [name, content] : artifacts->files) {
      if (!ex.wants("csv")) break;
      detail::write_file(dir / name, content);
      files.push_back(name);
    }
    if (ex.wants("json")) {
      detail::write_file(dir / "summary.json", artifacts->summary.dump(2) + "\n");
      files.push_back("summary.json");
    }
  }
  std::sort(files.begin(), files.end());
  manifest["files"] = files;
  detail::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  outcome.directory = dir;
  outcome.manifest = std::move(manifest);
  if (outcome.exit_code == kExitOk) outcome.message = "wrote " + std::to_string(files.size() + 1) + " files to " + dir.string();
  return outcome;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(path.string() + ": cannot open");
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

/// Re-reads the stored config of a run and checks it against the manifest digest
/// and file list.
inline bool verify_manifest(const std::filesystem::path& dir, std::string* why = nullptr) {
  auto reject = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  try {
    json manifest = read_json_file(dir / "manifest.json");
    json config = read_json_file(dir / "config.json");
    if (!manifest.contains("config_digest")) return reject("manifest has no config_digest");
    if (manifest["config_digest"] != config_digest(config)) return reject("config digest mismatch");
    for (const auto& f : manifest.value("files", json::array())) {
      if (!std::filesystem::exists(dir / f.get<std::string>())) return reject("missing file " + f.get<std::string>());
    }
  } catch (const std::exception& e) {
    return reject(e.what());
  }
  return true;
}

}  // namespace ergolab::experiment
