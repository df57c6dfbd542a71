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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "gtest/gtest.h"

#include "ergolab/experiment/presets.hpp"
#include "ergolab/experiment/runner.hpp"

namespace ergolab::experiment {
namespace {

namespace fs = std::filesystem;

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("ergolab_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::vector<std::string> csv_column(const std::string& csv, std::size_t col) {
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  std::vector<std::string> out;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string cell;
    for (std::size_t i = 0; i <= col; ++i) std::getline(ls, cell, ',');
    out.push_back(cell);
  }
  return out;
}

json half_rotation_zero_sums(std::int64_t n) {
  return {{"system", {{"kind", "rotation"}, {"alpha", "rational:1/2"}}},
          {"cocycle", {{"kind", "step"}, {"breakpoints", {"0", "0.5"}}, {"values", {1, -1}}}},
          {"detector", {{"kind", "zero_sums"}, {"x", "0"}, {"N", n}}},
          {"output", {{"directory", "zero-sums"}}}};
}

json set_return_config() {
  return {{"system",
           {{"kind", "special_flow"},
            {"base", {{"kind", "rotation"}, {"alpha", "rational:1/2"}}},
            {"roof", {{"heights", {"1"}}}}}},
          {"cocycle", {{"kind", "phase"}, {"cells", {"0", "0.5"}}, {"columns", {{{"values", {1}}}, {{"values", {-1}}}}}}},
          {"detector",
           {{"kind", "flow_zero_set_returns"},
            {"x", {{"a", "0"}, {"b", "0"}}},
            {"T", 6},
            {"target", {{{"a_lo", "0"}, {"a_hi", "0.5"}}}}}},
          {"output", {{"directory", "set-return"}}}};
}

TEST(RunExperimentTest, ZeroSumsOracle) {
  ScratchDir dir("zero_sums");
  RunOutcome r = run_experiment(half_rotation_zero_sums(10), {dir.path()});
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  std::string csv = slurp(r.directory / "records.csv");
  EXPECT_EQ(csv_column(csv, 0), (std::vector<std::string>{"2", "4", "6", "8", "10"}));
  EXPECT_EQ(csv_column(csv, 1), std::vector<std::string>(5, "0"));
  EXPECT_EQ(r.manifest["warnings"].size(), 1u);
  EXPECT_NE(r.manifest["warnings"][0].get<std::string>().find("rational"), std::string::npos);
}

TEST(RunExperimentTest, NegativeCountIsConfigErrorWithoutFiles) {
  ScratchDir dir("negative");
  RunOutcome r = run_experiment(half_rotation_zero_sums(-3), {dir.path()});
  EXPECT_EQ(r.exit_code, kExitConfig);
  EXPECT_NE(r.message.find("detector.N"), std::string::npos);
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(RunExperimentTest, SetReturnOracle) {
  ScratchDir dir("set_return");
  RunOutcome r = run_experiment(set_return_config(), {dir.path()});
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  std::string csv = slurp(r.directory / "records.csv");
  EXPECT_EQ(csv_column(csv, 0), (std::vector<std::string>{"2", "4", "6"}));
  EXPECT_EQ(csv_column(csv, 3), (std::vector<std::string>{"1", "1", "1"}));
}

TEST(RunExperimentTest, UnknownKindsAreConfigErrors) {
  json c = half_rotation_zero_sums(10);
  c["detector"]["kind"] = "teleport";
  EXPECT_FALSE(validate(c).ok);
  c = half_rotation_zero_sums(10);
  c["system"]["kind"] = "baker";
  EXPECT_FALSE(validate(c).ok);
  c = half_rotation_zero_sums(10);
  c["cocycle"]["values"] = {1, 1};
  Validation v = validate(c);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.error.find("zero mean"), std::string::npos);
  c = half_rotation_zero_sums(10);
  c["extra"] = 1;
  EXPECT_FALSE(validate(c).ok);
  c = half_rotation_zero_sums(10);
  c.erase("output");
  EXPECT_FALSE(validate(c).ok);
}

TEST(RunExperimentTest, SamplingNeedsSeed) {
  json c = *&find_preset("theorem-d-weiss")->config;
  c["sampling"].erase("seed");
  Validation v = validate(c);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.error.find("sampling.seed"), std::string::npos);
}

TEST(RunExperimentTest, PrecisionFailureRecordsStep) {
  // x sits within rounding error of 1 - alpha, so S x is undecidable against 0.
  json c = {{"system", {{"kind", "rotation"}, {"alpha", "preset:golden"}}},
            {"cocycle", {{"kind", "step"}, {"breakpoints", {"0", "0.5"}}, {"values", {1, -1}}}},
            {"detector",
             {{"kind", "zero_sums"},
              {"x", "0.38196601125010515179541316563436188227969082019423713786455137729473953718109755"},
              {"N", 10}}},
            {"output", {{"directory", "precision"}}}};
  ScratchDir dir("precision");
  RunOutcome r = run_experiment(c, {dir.path()});
  ASSERT_EQ(r.exit_code, kExitPrecision) << r.message;
  EXPECT_EQ(r.manifest["status"], "precision_exhausted");
  EXPECT_EQ(r.manifest["error"]["step"], 1);
  EXPECT_TRUE(fs::exists(r.directory / "manifest.json"));
  EXPECT_FALSE(fs::exists(r.directory / "records.csv"));
}

TEST(RunExperimentTest, BudgetFailure) {
  json c = {{"system", {{"kind", "rotation"}, {"alpha", "preset:golden"}}},
            {"cocycle", {{"kind", "step"}, {"breakpoints", {"0", "0.5"}}, {"values", {1, -1}}}},
            {"detector", {{"kind", "induced"}, {"target", json::array({json::array({"0.6", "0.61"})})}, {"budget", 5}}},
            {"sampling", {{"samples", 100}, {"seed", 1}}},
            {"output", {{"directory", "budget"}}}};
  ScratchDir dir("budget");
  RunOutcome r = run_experiment(c, {dir.path()});
  EXPECT_EQ(r.exit_code, kExitBudget) << r.message;
  EXPECT_EQ(r.manifest["status"], "budget_exceeded");
}

TEST(RunExperimentTest, VanishingStartIsConfigError) {
  json c = set_return_config();
  c["cocycle"] = {{"kind", "zero"}};
  ScratchDir dir("vanishing");
  RunOutcome r = run_experiment(c, {dir.path()});
  EXPECT_EQ(r.exit_code, kExitConfig);
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(RunExperimentTest, OtherDetectorsRun) {
  ScratchDir dir("others");
  json profile = set_return_config();
  profile["detector"] = {{"kind", "sigma_profile"}, {"x", {{"a", "0"}, {"b", "0"}}}, {"T", 2}};
  profile["output"]["directory"] = "profile";
  RunOutcome p = run_experiment(profile, {dir.path()});
  ASSERT_EQ(p.exit_code, kExitOk) << p.message;
  EXPECT_EQ(slurp(p.directory / "profile.csv"), "t,sigma\n0,0\n1,1\n2,0\n");

  json near = half_rotation_zero_sums(10);
  near["system"]["alpha"] = "rational:1/3";
  near["detector"] = {{"kind", "near_returns"}, {"x", "0"}, {"N", 10}, {"eps", "1e-9"}};
  near["output"]["directory"] = "near";
  RunOutcome n = run_experiment(near, {dir.path()});
  ASSERT_EQ(n.exit_code, kExitOk) << n.message;
  EXPECT_EQ(slurp(n.directory / "returns.csv"), "n\n3\n6\n9\n");

  json measure = half_rotation_zero_sums(10);
  measure["system"] = {{"kind", "iet"}, {"lengths", {"0.25", "0.75"}}, {"permutation", {2, 1}}};
  measure["detector"] = {{"kind", "measure_check"}};
  measure["sampling"] = {{"samples", 20000}, {"seed", 4}};
  measure["output"]["directory"] = "measure";
  RunOutcome m = run_experiment(measure, {dir.path()});
  ASSERT_EQ(m.exit_code, kExitOk) << m.message;
  EXPECT_TRUE(m.manifest.contains("seed"));
  json summary = read_json_file(m.directory / "summary.json");
  EXPECT_TRUE(summary["passed"].get<bool>());

  json induced = *&find_preset("theorem-c-induced")->config;
  induced["system"]["alpha"] = "rational:1/4";
  induced["sampling"]["samples"] = 1000;
  induced["output"] = {{"directory", "induced"}, {"formats", {"csv", "json", "samples"}}};
  RunOutcome i = run_experiment(induced, {dir.path()});
  ASSERT_EQ(i.exit_code, kExitOk) << i.message;
  json is = read_json_file(i.directory / "summary.json");
  EXPECT_EQ(is["exact"]["mean_n"], "2");
  EXPECT_EQ(is["exact"]["mean_f_tilde"], "0");
  EXPECT_TRUE(fs::exists(i.directory / "samples.csv"));
}

TEST(PresetsTest, CatalogAndValidation) {
  const std::vector<std::string> names = {"krygin-atkinson",  "shneiberg",         "theorem-a",       "theorem-b-flow",
                                          "theorem-b-winding", "theorem-c-induced", "theorem-d-weiss", "skew-construct"};
  auto all = presets();
  ASSERT_EQ(all.size(), 8u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].name, names[i]);
    Validation v = validate(all[i].config);
    EXPECT_TRUE(v.ok) << all[i].name << ": " << v.error;
  }
  const json& c = find_preset("theorem-c-induced")->config;
  EXPECT_EQ(c["system"]["alpha"], "preset:golden");
  EXPECT_EQ(c["detector"]["target"], json::array({json::array({"0", "1/2"})}));
  EXPECT_EQ(find_preset("no-such-preset"), nullptr);
}

TEST(PresetsTest, RerunsAreByteIdenticalAndManifestsVerify) {
  ScratchDir a("presets_a"), b("presets_b");
  for (const auto& p : presets()) {
    RunOutcome ra = run_experiment(p.config, {a.path()});
    RunOutcome rb = run_experiment(p.config, {b.path()});
    ASSERT_EQ(ra.exit_code, kExitOk) << p.name << ": " << ra.message;
    ASSERT_EQ(rb.exit_code, kExitOk) << p.name << ": " << rb.message;
    std::size_t csvs = 0;
    for (const auto& f : ra.manifest["files"]) {
      std::string name = f.get<std::string>();
      if (name.ends_with(".csv")) {
        ++csvs;
        EXPECT_EQ(slurp(ra.directory / name), slurp(rb.directory / name)) << p.name << "/" << name;
      }
    }
    EXPECT_GE(csvs, 1u) << p.name;
    EXPECT_TRUE(verify_manifest(ra.directory)) << p.name;
    EXPECT_LT(ra.manifest["duration_seconds"].get<double>(), 60.0) << p.name;
  }
}

TEST(ManifestTest, TamperedConfigFailsVerification) {
  ScratchDir dir("tamper");
  RunOutcome r = run_experiment(half_rotation_zero_sums(10), {dir.path()});
  ASSERT_TRUE(verify_manifest(r.directory));
  json c = read_json_file(r.directory / "config.json");
  c["detector"]["N"] = 11;
  std::ofstream(r.directory / "config.json") << c.dump(2);
  std::string why;
  EXPECT_FALSE(verify_manifest(r.directory, &why));
  EXPECT_EQ(why, "config digest mismatch");
}

TEST(ManifestTest, DigestIgnoresKeyOrderAndWhitespace) {
  json a = json::parse(R"({"b": 1, "a": [1, 2]})");
  json b = json::parse(R"({ "a":[1,2],"b":1 })");
  EXPECT_EQ(config_digest(a), config_digest(b));
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

int cli(const std::string& args, const fs::path& root) {
  std::string cmd = "ERGOLAB_OUTPUT_ROOT='" + root.string() + "' '" ERGOLAB_CLI_PATH "' " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, ExitCodesAndOutputRoot) {
  ScratchDir dir("cli");
  auto write = [&](const std::string& name, const json& c) {
    fs::path p = dir.path() / name;
    std::ofstream(p) << c.dump();
    return p.string();
  };
  fs::path root = dir.path() / "root";
  EXPECT_EQ(cli("run " + write("ok.json", half_rotation_zero_sums(10)), root), 0);
  EXPECT_TRUE(fs::exists(root / "zero-sums" / "records.csv"));
  EXPECT_EQ(cli("verify " + (root / "zero-sums").string(), root), 0);
  EXPECT_EQ(cli("run " + write("bad.json", half_rotation_zero_sums(-1)), root), 1);
  EXPECT_EQ(cli("validate " + write("ok2.json", half_rotation_zero_sums(10)), root), 0);
  EXPECT_EQ(cli("validate " + write("bad2.json", half_rotation_zero_sums(0)), root), 1);
  std::ofstream(dir.path() / "broken.json") << "{not json";
  EXPECT_EQ(cli("run " + (dir.path() / "broken.json").string(), root), 1);
  EXPECT_EQ(cli("presets", root), 0);
  EXPECT_EQ(cli("presets --dump theorem-a", root), 0);
  EXPECT_EQ(cli("presets --dump nope", root), 1);
  EXPECT_EQ(cli("frobnicate", root), 1);

  json budget = {{"system", {{"kind", "rotation"}, {"alpha", "preset:golden"}}},
                 {"cocycle", {{"kind", "step"}, {"breakpoints", {"0", "0.5"}}, {"values", {1, -1}}}},
                 {"detector", {{"kind", "induced"}, {"target", json::array({json::array({"0.6", "0.61"})})}, {"budget", 5}}},
                 {"sampling", {{"samples", 100}, {"seed", 1}}},
                 {"output", {{"directory", "budget"}}}};
  EXPECT_EQ(cli("run " + write("budget.json", budget), root), 3);
}

}  // namespace
}  // namespace ergolab::experiment
