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

// Command-line front end: run, validate and list experiment configs.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ergolab/experiment/presets.hpp"
#include "ergolab/experiment/runner.hpp"

namespace ex = ergolab::experiment;

namespace {

int load(const std::string& path, ex::json& out) {
  try {
    out = ex::read_json_file(path);
    return ex::kExitOk;
  } catch (const ergolab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::kExitConfig;
  }
}

int run(const std::string& path) {
  ex::json config;
  if (int rc = load(path, config)) return rc;
  ex::RunOutcome r = ex::run_experiment(config);
  if (r.exit_code == ex::kExitOk) {
    for (const auto& w : r.manifest["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    std::cout << r.message << "\n";
  } else if (r.exit_code == ex::kExitConfig) {
    std::cerr << "config error: " << r.message << "\n";
  } else {
    std::cerr << (r.exit_code == ex::kExitPrecision ? "precision exhausted" : "budget exceeded") << ": " << r.message;
    if (!r.directory.empty()) std::cerr << " (manifest in " << r.directory.string() << ")";
    std::cerr << "\n";
  }
  return r.exit_code;
}

int validate(const std::string& path) {
  ex::json config;
  if (int rc = load(path, config)) return rc;
  ex::Validation v = ex::validate(config);
  if (!v.ok) {
    std::cerr << "config error: " << v.error << "\n";
    return ex::kExitConfig;
  }
  for (const auto& w : v.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "valid (digest " << ex::config_digest(config) << ")\n";
  return ex::kExitOk;
}

int list_presets(const std::string& dump) {
  if (!dump.empty()) {
    const ex::Preset* p = ex::find_preset(dump);
    if (!p) {
      std::cerr << "unknown preset '" << dump << "'\n";
      return ex::kExitConfig;
    }
    std::cout << p->config.dump(2) << "\n";
    return ex::kExitOk;
  }
  for (const auto& p : ex::presets()) std::cout << p.name << "\t" << p.summary << "\n";
  return ex::kExitOk;
}

int verify(const std::string& dir) {
  std::string why;
  if (ex::verify_manifest(dir, &why)) {
    std::cout << "manifest ok\n";
    return ex::kExitOk;
  }
  std::cerr << "manifest invalid: " << why << "\n";
  return ex::kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrence experiments for cocycles over ergodic rotations, exchanges and flows"};
  app.set_version_flag("--version", ex::kToolVersion);
  app.require_subcommand(1);

  std::string config_path, dump, run_dir;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run_cmd->add_option("config", config_path, "Config file")->required();
  auto* validate_cmd = app.add_subcommand("validate", "Check a config without running it");
  validate_cmd->add_option("config", config_path, "Config file")->required();
  auto* presets_cmd = app.add_subcommand("presets", "List the built-in presets");
  presets_cmd->add_option("--dump", dump, "Print the config of one preset");
  auto* verify_cmd = app.add_subcommand("verify", "Check a run directory against its manifest");
  verify_cmd->add_option("directory", run_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : ex::kExitConfig;
  }

  try {
    if (*run_cmd) return run(config_path);
    if (*validate_cmd) return validate(config_path);
    if (*presets_cmd) return list_presets(dump);
    if (*verify_cmd) return verify(run_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ex::kExitConfig;
  }
  return ex::kExitOk;
}
