// Copyright 2026 The mdclt Authors.
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

// mdclt: run limit-law experiments and the exact-algebra checks.
//
//   mdclt presets [--write DIR]
//   mdclt run (--preset NAME | --config PATH) [--seed U64] [--out DIR] [--threads N]
//   mdclt exactcheck [--fixtures DIR] [--out DIR]
//
// Exit codes: 0 pass, 2 statistical or identity failure, 1 usage error.

#include "mdclt/cli/presets.hpp"
#include "mdclt/cli/run.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#ifndef MDCLT_FIXTURE_DIR
#define MDCLT_FIXTURE_DIR "fixtures/exact"
#endif

namespace {

using namespace mdclt::cli;

int cmd_presets(const std::string& write_dir) {
  for (const auto& name : preset_names()) {
    std::cout << name << '\n';
    if (write_dir.empty()) continue;
    std::filesystem::create_directories(write_dir);
    std::ofstream os(std::filesystem::path(write_dir) / (name + ".json"));
    if (!os) throw UsageError("cannot write into " + write_dir);
    os << preset_json(name).dump(2) << '\n';
  }
  return kExitPass;
}

int cmd_run(const std::string& preset_name, const std::string& config_path,
            std::optional<std::uint64_t> seed, std::string out, unsigned threads) {
  if (preset_name.empty() == config_path.empty()) {
    throw UsageError("run: give exactly one of --preset and --config");
  }
  if (threads == 0) throw UsageError("run: --threads must be >= 1");
  auto cfg = preset_name.empty() ? load_config(config_path) : preset(preset_name);
  if (seed) cfg.seed = *seed;
  if (out.empty()) out = "out/" + cfg.name;
  const auto res = run_experiment(cfg, threads);
  write_artifacts(res, out, threads);
  print_summary(std::cout, res);
  std::cout << "artifacts: " << out << '\n';
  return res.exit_code();
}

int cmd_exactcheck(const std::string& dir, const std::string& out) {
  const auto res = exact_check(dir, std::cout);
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream os(std::filesystem::path(out) / "exactcheck.json");
    if (!os) throw UsageError("cannot write into " + out);
    os << res.report.dump(2) << '\n';
  }
  std::cout << "verdict: " << (res.passed ? "pass" : "fail") << '\n';
  return res.passed ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Martingale-difference random fields: limit-law experiments and exact checks"};
  app.require_subcommand(1);

  auto* presets = app.add_subcommand("presets", "List built-in experiments");
  std::string write_dir;
  presets->add_option("--write", write_dir, "Also write each preset config into DIR");

  auto* run = app.add_subcommand("run", "Run an experiment");
  std::string preset_name, config_path, out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  run->add_option("--preset", preset_name, "Built-in experiment name");
  run->add_option("--config", config_path, "Experiment config (JSON)");
  run->add_option("--seed", seed, "Master seed (overrides the config)");
  run->add_option("--out", out, "Output directory (default out/<name>)");
  run->add_option("--threads", threads, "Worker threads; results do not depend on it");

  auto* exactcheck = app.add_subcommand("exactcheck", "Exact-algebra fixtures and torus parity");
  std::string fixture_dir = MDCLT_FIXTURE_DIR, exact_out;
  exactcheck->add_option("--fixtures", fixture_dir, "Fixture directory");
  exactcheck->add_option("--out", exact_out, "Write exactcheck.json into DIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (presets->parsed()) return cmd_presets(write_dir);
    if (run->parsed()) return cmd_run(preset_name, config_path, seed, out, threads);
    return cmd_exactcheck(fixture_dir, exact_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const mdclt::exact::FixtureError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}
