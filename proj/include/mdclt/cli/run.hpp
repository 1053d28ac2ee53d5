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

// Running an experiment and the exact-algebra check, with their artifacts
// and exit codes: 0 pass, 2 statistical (or identity) failure, 1 usage error.

#pragma once

#include "mdclt/cli/config.hpp"
#include "mdclt/exact/fixtures.hpp"
#include "mdclt/fields/torus_parity.hpp"
#include "mdclt/limit/law.hpp"
#include "mdclt/stats/convolution.hpp"
#include "mdclt/stats/empirical.hpp"
#include "mdclt/stats/queue.hpp"
#include "mdclt/stats/replicate.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mdclt::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;

// Limit-law draws for comparison k come from this stream, away from every
// field stream.
inline constexpr std::uint32_t kLawStreamBase = 0x40000000U;

struct RunResult {
  bool passed = false;
  nlohmann::json report;            // deterministic in (config, seed)
  std::vector<double> samples;      // by replicate id
  stats::EmpiricalDist dist;
  limit::CFGrid ecf_grid;

  int exit_code() const { return passed ? kExitPass : kExitFail; }
};

namespace detail {

inline std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline nlohmann::json evaluate(const Comparison& c, std::size_t index, const ExperimentConfig& cfg,
                               const stats::EmpiricalDist& dist,
                               const std::optional<stats::ConvolutionReport>& conv) {
  nlohmann::json out = to_json(c);
  double value = 0.0;
  const std::uint32_t law_stream = kLawStreamBase + static_cast<std::uint32_t>(index);
  if (c.mode == "ks") {
    value = stats::ks_distance(dist, *c.law);
  } else if (c.mode == "ks_two_sample") {
    const stats::EmpiricalDist ref(limit::sample_limit_batch(*c.law, cfg.seed, law_stream, c.draws));
    value = stats::ks_distance(dist, ref);
  } else if (c.mode == "ks_chi_square1") {
    value = stats::ks_distance(dist, std::function<double(double)>(stats::chi_square1_cdf));
  } else if (c.mode == "ecf") {
    const auto emp = stats::ecf(dist, c.t);
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t k = 0; k < c.t.size(); ++k) {
      const double ref = limit::cf_limit(*c.law, c.t[k]);
      const double gap = std::abs(emp.cf[k] - ref);
      value = std::max(value, gap);
      points.push_back({{"t", c.t[k]}, {"ecf", emp.cf[k]}, {"cf", ref}, {"gap", gap}});
    }
    out["points"] = points;
  } else if (c.mode == "variance") {
    double v = 0.0;
    if (c.law) {
      v = stats::moments(limit::sample_limit_batch(*c.law, cfg.seed, law_stream, c.draws)).variance;
      out["source"] = "limit_sampler";
    } else {
      v = stats::moments(dist).variance;
      out["source"] = "samples";
    }
    out["variance"] = v;
    value = std::abs(v - c.target) / c.target;
  } else if (c.mode == "convolution") {
    value = conv->max_gap_product;
    out["max_gap_product"] = conv->max_gap_product;
    if (conv->max_gap_reference) {
      out["max_gap_reference"] = *conv->max_gap_reference;
      value = std::max(value, *conv->max_gap_reference);
    }
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t k = 0; k < conv->t.size(); ++k) {
      nlohmann::json p{{"t", conv->t[k]},          {"composite", conv->composite[k]},
                       {"first", conv->first[k]},  {"second", conv->second[k]},
                       {"product", conv->product[k]}};
      if (!conv->reference.empty()) p["reference"] = conv->reference[k];
      points.push_back(p);
    }
    out["points"] = points;
  } else if (c.mode == "queue_condition") {
    const double norm = stats::queue_condition_norm(cfg.field, c.lag);
    out["norm"] = norm;
    value = std::abs(norm - c.expected);
  }
  out["value"] = value;
  out["pass"] = value <= c.tolerance;
  return out;
}

}  // namespace detail

// Runs the experiment; pure in (config, seed), whatever the thread count.
inline RunResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 1) {
  RunResult res;
  std::optional<stats::ConvolutionReport> conv;
  stats::PathMode taken = stats::PathMode::Generic;
  if (cfg.is_convolution()) {
    const auto& parts = *cfg.field.as<fields::Composite>();
    conv = stats::convolution_check(*parts.g, *parts.h, cfg.window, cfg.replicates, cfg.t_grid,
                                    cfg.seed, threads);
    res.samples = conv->composite_samples;
  } else {
    auto rep = stats::replicate_stats(cfg.field, cfg.window, cfg.statistic, cfg.replicates, cfg.seed,
                                      threads, cfg.path);
    res.samples = std::move(rep.raw);
    taken = rep.path;
  }
  const auto digest = fields::digest(cfg.field);
  res.dist = stats::EmpiricalDist(res.samples, digest);
  res.ecf_grid = stats::ecf(res.dist, cfg.t_grid);
  const auto m = stats::moments(res.dist);

  nlohmann::json comparisons = nlohmann::json::array();
  res.passed = true;
  for (std::size_t k = 0; k < cfg.comparisons.size(); ++k) {
    auto r = detail::evaluate(cfg.comparisons[k], k, cfg, res.dist, conv);
    res.passed = res.passed && r.at("pass").get<bool>();
    comparisons.push_back(std::move(r));
  }
  nlohmann::json ecf_grid = nlohmann::json::array();
  for (std::size_t k = 0; k < cfg.t_grid.size(); ++k) {
    nlohmann::json p{{"t", cfg.t_grid[k]}, {"ecf", res.ecf_grid.cf[k]}, {"imag", res.ecf_grid.imag[k]}};
    if (cfg.statistic == stats::StatisticKind::PartialSum) {
      if (const auto ref = stats::reference_cf(cfg.field, cfg.t_grid[k])) p["reference"] = *ref;
    }
    ecf_grid.push_back(p);
  }
  res.report = {{"schema_version", kSchemaVersion},
                {"name", cfg.name},
                {"config", to_json(cfg)},
                {"spec", fields::to_json(cfg.field)},
                {"spec_digest", detail::hex64(digest)},
                {"window", cfg.window.lengths()},
                {"R", cfg.replicates},
                {"seed", cfg.seed},
                {"statistic", stats::to_string(cfg.statistic)},
                {"path", stats::to_string(taken)},
                {"moments",
                 {{"mean", m.mean},
                  {"variance", m.variance},
                  {"skewness", m.skewness},
                  {"excess_kurtosis", m.excess_kurtosis}}},
                {"comparisons", comparisons},
                {"ecf_grid", ecf_grid},
                {"verdict", res.passed ? "pass" : "fail"}};
  return res;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// report.json, meta.json (the only file with a timestamp), samples.csv (by
// replicate id), ecdf.csv and ecf.csv.
inline void write_artifacts(const RunResult& res, const std::filesystem::path& dir, unsigned threads) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw UsageError("cannot create output directory " + dir.string());
  }
  auto open = [&](const char* name) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw UsageError("cannot write " + (dir / name).string());
    return os;
  };
  {
    auto os = open("report.json");
    os << res.report.dump(2) << '\n';
  }
  {
    auto os = open("meta.json");
    const nlohmann::json meta{{"schema_version", kSchemaVersion},
                              {"timestamp", utc_timestamp()},
                              {"threads", threads}};
    os << meta.dump(2) << '\n';
  }
  {
    auto os = open("samples.csv");
    os << "value\n";
    for (double v : res.samples) os << detail::fmt(v) << '\n';
  }
  {
    auto os = open("ecdf.csv");
    os << "x,ecdf\n";
    const auto& s = res.dist.samples();
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k + 1 < s.size() && s[k + 1] == s[k]) continue;
      os << detail::fmt(s[k]) << ',' << detail::fmt(static_cast<double>(k + 1) / s.size()) << '\n';
    }
  }
  {
    auto os = open("ecf.csv");
    limit::write_csv(os, res.ecf_grid);
  }
  for (const char* name : {"report.json", "meta.json", "samples.csv", "ecdf.csv", "ecf.csv"}) {
    if (!std::filesystem::exists(dir / name)) throw UsageError(std::string("failed to write ") + name);
  }
}

// One line per comparison.
inline void print_summary(std::ostream& os, const RunResult& res) {
  os << res.report.at("name").get<std::string>() << ": R=" << res.report.at("R")
     << " path=" << res.report.at("path").get<std::string>() << '\n';
  for (const auto& c : res.report.at("comparisons")) {
    os << "  " << (c.at("pass").get<bool>() ? "PASS" : "FAIL") << ' '
       << c.at("mode").get<std::string>() << " value=" << detail::fmt(c.at("value").get<double>())
       << " tolerance=" << c.at("tolerance").get<double>() << '\n';
  }
  os << "verdict: " << res.report.at("verdict").get<std::string>() << '\n';
}

struct ExactCheckResult {
  bool passed = true;
  nlohmann::json report;
};

inline constexpr std::uint64_t kTorusParityMax = 64;

// All fixtures in `dir`, then the torus parity identity for n = 0..64.
// Throws exact::FixtureError on a missing, empty or malformed fixture set.
inline ExactCheckResult exact_check(const std::filesystem::path& dir, std::ostream& log) {
  ExactCheckResult out;
  nlohmann::json fixtures = nlohmann::json::array();
  for (const auto& outcome : exact::run_fixture_dir(dir)) {
    log << (outcome.passed() ? "PASS " : "FAIL ") << outcome.check << ' ' << outcome.name << '\n';
    for (const auto& r : outcome.results) {
      if (r.status != exact::Status::Pass) {
        log << "  " << exact::to_string(r.status) << ": " << r.identity;
        if (r.witness) log << " [witness: " << *r.witness << ']';
        log << '\n';
      }
    }
    out.passed = out.passed && outcome.passed();
    fixtures.push_back(exact::to_json(outcome));
  }
  bool parity = true;
  std::string first_bad;
  for (std::uint64_t n = 0; n <= kTorusParityMax; ++n) {
    if (!fields::torus_parity(n).holds()) {
      if (parity) first_bad = std::to_string(n);
      parity = false;
    }
  }
  log << (parity ? "PASS " : "FAIL ") << "torus parity n=0.." << kTorusParityMax
      << (parity ? "" : " first failure at n=" + first_bad) << '\n';
  out.passed = out.passed && parity;
  out.report = {{"schema_version", kSchemaVersion},
                {"fixture_dir", dir.filename().string()},
                {"fixtures", fixtures},
                {"torus_parity", {{"max_n", kTorusParityMax}, {"holds", parity}}},
                {"verdict", out.passed ? "pass" : "fail"}};
  return out;
}

}  // namespace mdclt::cli
