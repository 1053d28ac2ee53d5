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

#include "mdclt/cli/config.hpp"
#include "mdclt/cli/presets.hpp"
#include "mdclt/cli/run.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using namespace mdclt::cli;
using nlohmann::json;

struct CliResult {
  int code = -1;
  std::string output;  // stdout and stderr
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MDCLT_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) r.output += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mdclt_cli_" + std::to_string(getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const json& j) {
    const auto p = dir_ / (name + ".json");
    std::ofstream(p) << j.dump(2);
    return p;
  }

  static json small_signflip() {
    return {{"name", "small-signflip"},
            {"field", {{"kind", "signflip"}}},
            {"window", {32, 32}},
            {"replicates", 400},
            {"seed", 5},
            {"comparisons",
             {{{"mode", "ecf"},
               {"law", {{"law", "product_of_normals"}, {"d", 2}}},
               {"t", {0.5, 1.0}},
               {"tolerance", 0.2}}}}};
  }

  fs::path dir_;
};

// ------------------------------------------------------------------ presets

TEST(Presets, AllParseAndValidate) {
  for (const auto& name : preset_names()) {
    const auto cfg = preset(name);
    EXPECT_EQ(cfg.name, name);
    EXPECT_EQ(cfg.seed, kDefaultSeed);
    EXPECT_FALSE(cfg.comparisons.empty()) << name;
    EXPECT_GE(cfg.replicates, 10000U) << name;
  }
  EXPECT_THROW(preset("nope"), UsageError);
}

TEST(Presets, ShippedConfigFilesMatchBuiltIns) {
  for (const auto& name : preset_names()) {
    const auto path = fs::path(MDCLT_CONFIG_DIR) / (name + ".json");
    ASSERT_TRUE(fs::exists(path)) << path;
    std::ifstream in(path);
    EXPECT_EQ(json::parse(in), preset_json(name)) << name;
  }
}

TEST(Presets, CoverEveryExampleField) {
  std::set<std::string> kinds;
  for (const auto& name : preset_names()) kinds.insert(preset(name).field.tag());
  for (const char* k : {"product_iid", "chaos", "signflip", "iid", "composite"}) {
    EXPECT_TRUE(kinds.count(k)) << k;
  }
}

TEST_F(CliTest, PresetsSubcommandListsNames) {
  const auto r = run_cli("presets");
  EXPECT_EQ(r.code, 0);
  for (const auto& name : preset_names()) EXPECT_NE(r.output.find(name), std::string::npos);
}

// ------------------------------------------------------------------- config

TEST(Config, RejectsInvalidInvariants) {
  auto base = json{{"name", "x"},
                   {"field", {{"kind", "iid"}, {"d", 2}}},
                   {"window", {8, 8}},
                   {"replicates", 10},
                   {"seed", 1}};
  EXPECT_NO_THROW(parse_config(base));
  auto bad = base;
  bad["replicates"] = 1;
  EXPECT_THROW(parse_config(bad), UsageError);
  bad = base;
  bad.erase("seed");
  EXPECT_THROW(parse_config(bad), UsageError);
  bad = base;
  bad["window"] = {8, 8, 8};
  EXPECT_THROW(parse_config(bad), UsageError);
  bad = base;
  bad["field"] = {{"kind", "mystery"}};
  EXPECT_THROW(parse_config(bad), UsageError);
  bad = base;
  bad["path"] = "fast";
  EXPECT_THROW(parse_config(bad), UsageError);
  bad = base;
  bad["comparisons"] = {{{"mode", "ks"}, {"law", {{"law", "product_of_normals"}, {"d", 3}}}, {"tolerance", 0.1}}};
  EXPECT_THROW(parse_config(bad), UsageError);
  bad = base;
  bad["comparisons"] = {{{"mode", "convolution"}, {"tolerance", 0.1}}};
  EXPECT_THROW(parse_config(bad), UsageError);
  bad = base;
  bad["comparisons"] = {{{"mode", "guess"}, {"tolerance", 0.1}}};
  EXPECT_THROW(parse_config(bad), UsageError);
  bad = base;
  bad["field"] = {{"kind", "product_iid"}, {"d", 2}};
  bad["comparisons"] = {{{"mode", "queue_condition"}, {"lag", 1}, {"tolerance", 0.0}}};
  EXPECT_THROW(parse_config(bad), UsageError);
}

TEST(Config, RoundTripsThroughJson) {
  for (const auto& name : preset_names()) {
    const auto cfg = preset(name);
    const auto again = parse_config(to_json(cfg));
    EXPECT_EQ(to_json(again), to_json(cfg)) << name;
  }
}

// ---------------------------------------------------------------------- run

TEST_F(CliTest, RunIsDeterministicAcrossRunsAndThreads) {
  const auto cfg = write_config("cfg", small_signflip());
  const auto a = run_cli("run --config " + cfg.string() + " --out " + (dir_ / "a").string());
  const auto b = run_cli("run --config " + cfg.string() + " --threads 4 --out " + (dir_ / "b").string());
  ASSERT_EQ(a.code, 0) << a.output;
  ASSERT_EQ(b.code, 0) << b.output;
  for (const char* f : {"report.json", "samples.csv", "ecdf.csv", "ecf.csv"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  const auto report = json::parse(slurp(dir_ / "a" / "report.json"));
  EXPECT_EQ(report.at("schema_version"), kSchemaVersion);
  EXPECT_FALSE(report.contains("timestamp"));
  EXPECT_EQ(report.at("R"), 400);
  const auto meta = json::parse(slurp(dir_ / "b" / "meta.json"));
  EXPECT_TRUE(meta.contains("timestamp"));
  EXPECT_EQ(meta.at("threads"), 4);
}

TEST_F(CliTest, SeedFlagOverridesConfig) {
  const auto cfg = write_config("cfg", small_signflip());
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir_ / "a").string()).code, 0);
  const auto r = run_cli("run --config " + cfg.string() + " --seed 6 --out " + (dir_ / "b").string());
  EXPECT_NE(slurp(dir_ / "a" / "samples.csv"), slurp(dir_ / "b" / "samples.csv"));
  EXPECT_EQ(json::parse(slurp(dir_ / "b" / "report.json")).at("seed"), 6);
  (void)r;
}

TEST_F(CliTest, SamplesCsvHasOneRowPerReplicate) {
  const auto cfg = write_config("cfg", small_signflip());
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + dir_.string()).code, 0);
  std::ifstream in(dir_ / "samples.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "value");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 400);
  std::ifstream ecf(dir_ / "ecf.csv");
  std::getline(ecf, line);
  EXPECT_EQ(line, "t,cf,imag");
}

TEST_F(CliTest, MalformedConfigExitsOne) {
  auto j = small_signflip();
  j["replicates"] = 1;
  const auto r = run_cli("run --config " + write_config("bad", j).string() + " --out " + dir_.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("replicates"), std::string::npos) << r.output;
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run_cli("").code, 1);
  EXPECT_EQ(run_cli("frobnicate").code, 1);
  EXPECT_EQ(run_cli("run").code, 1);
  EXPECT_EQ(run_cli("run --preset nope").code, 1);
  EXPECT_EQ(run_cli("run --preset bessel --config x.json").code, 1);
  EXPECT_EQ(run_cli("run --config " + (dir_ / "missing.json").string()).code, 1);
  EXPECT_EQ(run_cli("run --preset bessel --threads 0").code, 1);
  EXPECT_EQ(run_cli("run --preset bessel --seed minus-one").code, 1);
  std::ofstream(dir_ / "garbage.json") << "{ not json";
  EXPECT_EQ(run_cli("run --config " + (dir_ / "garbage.json").string()).code, 1);
}

TEST_F(CliTest, UnwritableOutputExitsOne) {
  std::ofstream(dir_ / "file") << "x";
  const auto cfg = write_config("cfg", small_signflip());
  const auto r = run_cli("run --config " + cfg.string() + " --out " + (dir_ / "file" / "sub").string());
  EXPECT_EQ(r.code, 1) << r.output;
}

TEST_F(CliTest, StatisticalFailureExitsTwo) {
  json j{{"name", "wrong-variance"},
         {"field", {{"kind", "iid"}, {"d", 2}}},
         {"window", {8, 8}},
         {"replicates", 2000},
         {"seed", 3},
         {"comparisons",
          {{{"mode", "ks"}, {"law", {{"law", "normal"}, {"variance", 4.0}}}, {"tolerance", 0.02}}}}};
  const auto r = run_cli("run --config " + write_config("cfg", j).string() + " --out " + dir_.string());
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_EQ(json::parse(slurp(dir_ / "report.json")).at("verdict"), "fail");
}

// ------------------------------------------------------------ library level

TEST(RunExperiment, ConvolutionConfig) {
  json j{{"name", "small-convolution"},
         {"field",
          {{"kind", "composite"},
           {"g", {{"kind", "product_iid"}, {"d", 2}, {"stream", 0}}},
           {"h", {{"kind", "iid"}, {"d", 2}, {"stream", 16}}}}},
         {"window", {16, 16}},
         {"replicates", 3000},
         {"seed", 9},
         {"comparisons", {{{"mode", "convolution"}, {"tolerance", 0.06}}}}};
  const auto res = run_experiment(parse_config(j));
  EXPECT_TRUE(res.passed) << res.report.dump(2);
  const auto& c = res.report.at("comparisons")[0];
  EXPECT_TRUE(c.contains("max_gap_reference"));
  EXPECT_EQ(c.at("points").size(), 13U);
  EXPECT_EQ(res.samples.size(), 3000U);
}

TEST(RunExperiment, ChiSquareAndVarianceModes) {
  json j{{"name", "small-eta"},
         {"field", {{"kind", "product_iid"}, {"d", 2}}},
         {"window", {64, 64}},
         {"statistic", "v_statistic"},
         {"replicates", 4000},
         {"seed", 10},
         {"comparisons",
          {{{"mode", "ks_chi_square1"}, {"tolerance", 0.05}},
           {{"mode", "variance"}, {"target", 2.0}, {"tolerance", 0.25}}}}};
  const auto res = run_experiment(parse_config(j));
  EXPECT_TRUE(res.passed) << res.report.dump(2);
  EXPECT_EQ(res.report.at("path"), "fast");
}

TEST(RunExperiment, ReportDependsOnlyOnConfigAndSeed) {
  const auto cfg = parse_config(json{{"name", "iid"},
                                     {"field", {{"kind", "iid"}, {"d", 2}}},
                                     {"window", {16, 16}},
                                     {"replicates", 300},
                                     {"seed", 2},
                                     {"comparisons",
                                      {{{"mode", "ks_two_sample"},
                                        {"law", {{"law", "normal"}, {"variance", 1.0}}},
                                        {"draws", 5000},
                                        {"tolerance", 0.2}}}}});
  EXPECT_EQ(run_experiment(cfg, 1).report.dump(), run_experiment(cfg, 3).report.dump());
}

// --------------------------------------------------------------- exactcheck

TEST_F(CliTest, ExactCheckDefaultFixturesPass) {
  const auto r = run_cli("exactcheck --out " + dir_.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("torus parity"), std::string::npos);
  EXPECT_EQ(json::parse(slurp(dir_ / "exactcheck.json")).at("verdict"), "pass");
}

TEST_F(CliTest, ExactCheckBrokenFixtureExitsTwoWithWitness) {
  const auto r = run_cli(std::string("exactcheck --fixtures ") + MDCLT_BROKEN_FIXTURE_DIR);
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_NE(r.output.find("witness"), std::string::npos) << r.output;
}

TEST_F(CliTest, ExactCheckEmptyOrBadFixturesExitOne) {
  EXPECT_EQ(run_cli("exactcheck --fixtures " + dir_.string()).code, 1);
  EXPECT_EQ(run_cli("exactcheck --fixtures " + (dir_ / "absent").string()).code, 1);
  std::ofstream(dir_ / "bad.json") << R"({"name": "x", "check": "prop_pro", "points": 2})";
  EXPECT_EQ(run_cli("exactcheck --fixtures " + dir_.string()).code, 1);
}

}  // namespace
