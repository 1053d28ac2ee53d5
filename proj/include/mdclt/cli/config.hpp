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

// Experiment configuration: one JSON object binding a field, a window, a
// statistic, a replicate count, a seed and the comparisons that decide the
// verdict.
//
//   {
//     "name": "bessel",
//     "field": {"kind": "signflip"},
//     "window": [256, 256],
//     "statistic": "partial_sum",          // or "v_statistic"
//     "replicates": 20000,
//     "seed": 20261016,
//     "path": "auto",                      // optional: auto | fast | generic
//     "t_grid": {"lo": 0, "hi": 3, "points": 13},   // optional
//     "comparisons": [
//       {"mode": "ks", "law": {"law": "product_of_normals", "d": 2}, "tolerance": 0.02},
//       {"mode": "ecf", "law": {...}, "t": [0.5, 1, 2], "tolerance": 0.02}
//     ]
//   }
//
// Comparison modes:
//   ks             one-sample KS against the law's distribution function
//   ks_two_sample  two-sample KS against `draws` samples of the law
//   ks_chi_square1 one-sample KS against the chi-square law with one degree
//   ecf            |ecf - cf| at each t
//   variance       relative error of the sample variance against `target`;
//                  with `law`, of `draws` limit-law samples instead
//   convolution    field must be a composite g + h; max gaps of the
//                  composite ecf against ecf(g) ecf(h) and the closed form
//   queue_condition  |queue_condition_norm(field, lag) - expected|

#pragma once

#include "mdclt/fields/spec.hpp"
#include "mdclt/fields/window.hpp"
#include "mdclt/limit/law.hpp"
#include "mdclt/stats/empirical.hpp"
#include "mdclt/stats/queue.hpp"
#include "mdclt/stats/replicate.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdclt::cli {

inline constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Comparison {
  std::string mode;
  double tolerance = 0.0;
  std::optional<limit::LimitLaw> law;
  std::uint64_t draws = 0;
  std::vector<double> t;
  double target = 1.0;
  std::uint64_t lag = 0;
  double expected = 0.0;
};

struct ExperimentConfig {
  std::string name;
  nlohmann::json field_json;
  fields::FieldSpec field = fields::FieldSpec::zero(2);
  fields::Window window;
  stats::StatisticKind statistic = stats::StatisticKind::PartialSum;
  std::uint64_t replicates = 0;
  std::uint64_t seed = 0;
  stats::PathMode path = stats::PathMode::Auto;
  std::vector<double> t_grid;
  std::vector<Comparison> comparisons;

  bool is_convolution() const {
    for (const auto& c : comparisons) {
      if (c.mode == "convolution") return true;
    }
    return false;
  }
};

namespace detail {

inline Comparison parse_comparison(const nlohmann::json& j, const ExperimentConfig& cfg) {
  Comparison c;
  c.mode = j.at("mode").get<std::string>();
  c.tolerance = j.at("tolerance").get<double>();
  if (!(c.tolerance >= 0.0)) throw UsageError("comparison tolerance must be non-negative");
  if (j.contains("law")) c.law = limit::law_from_json(j.at("law"));
  c.draws = j.value("draws", std::uint64_t{0});
  if (j.contains("t")) c.t = j.at("t").get<std::vector<double>>();
  c.target = j.value("target", 1.0);
  c.lag = j.value("lag", std::uint64_t{0});
  c.expected = j.value("expected", 0.0);
  auto need_law = [&] {
    if (!c.law) throw UsageError("comparison '" + c.mode + "' needs a law");
  };
  if (c.mode == "ks") {
    need_law();
    try {
      limit::cdf_limit(*c.law, 0.0);
    } catch (const limit::UnsupportedLaw&) {
      throw UsageError("law " + limit::law_name(*c.law) +
                       " has no distribution function for one-sample ks; use ks_two_sample");
    }
  } else if (c.mode == "ks_two_sample") {
    need_law();
    if (c.draws < 2) throw UsageError("ks_two_sample needs draws >= 2");
  } else if (c.mode == "ks_chi_square1") {
  } else if (c.mode == "ecf") {
    need_law();
    if (c.t.empty()) throw UsageError("ecf comparison needs a nonempty t list");
    try {
      limit::cf_limit(*c.law, 0.0);
    } catch (const limit::UnsupportedLaw&) {
      throw UsageError("law " + limit::law_name(*c.law) + " has no reference cf for ecf mode");
    }
  } else if (c.mode == "variance") {
    if (!(c.target > 0.0)) throw UsageError("variance comparison needs a positive target");
    if (c.law && c.draws < 2) throw UsageError("variance of a law needs draws >= 2");
  } else if (c.mode == "convolution") {
    if (!cfg.field.as<fields::Composite>()) {
      throw UsageError("convolution comparison needs a composite field");
    }
    if (cfg.statistic != stats::StatisticKind::PartialSum) {
      throw UsageError("convolution comparison works on partial sums");
    }
  } else if (c.mode == "queue_condition") {
    try {
      stats::queue_condition_norm(cfg.field, c.lag);
    } catch (const stats::UnsupportedSpec& e) {
      throw UsageError(e.what());
    }
  } else {
    throw UsageError("unknown comparison mode '" + c.mode + "'");
  }
  return c;
}

}  // namespace detail

// Parses and validates. Every failure is a UsageError naming the problem.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    cfg.name = j.at("name").get<std::string>();
    cfg.field_json = j.at("field");
    cfg.field = fields::field_spec_from_json(cfg.field_json);
    cfg.window = fields::Window(j.at("window").get<std::vector<std::uint64_t>>());
    if (cfg.window.dimension() != cfg.field.dimension()) {
      throw UsageError("window dimension " + std::to_string(cfg.window.dimension()) +
                       " differs from field dimension " + std::to_string(cfg.field.dimension()));
    }
    cfg.statistic = stats::statistic_from_string(j.value("statistic", std::string("partial_sum")));
    if (cfg.statistic == stats::StatisticKind::VStatistic && cfg.window.dimension() != 2) {
      throw UsageError("v_statistic needs a 2-d window");
    }
    if (!j.contains("replicates")) throw UsageError("replicates missing");
    const auto& r = j.at("replicates");
    if (!r.is_number_integer() || r.get<std::int64_t>() < 2) {
      throw UsageError("replicates must be an integer >= 2 (got " + r.dump() + ")");
    }
    cfg.replicates = r.get<std::uint64_t>();
    if (cfg.replicates > 0xffffffffULL) throw UsageError("replicates must be < 2^32");
    if (!j.contains("seed")) throw UsageError("seed missing (no ambient randomness)");
    const auto& seed = j.at("seed");
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
      throw UsageError("seed must be a non-negative integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.path = stats::path_from_string(j.value("path", std::string("auto")));
    if (cfg.path == stats::PathMode::Fast && !cfg.field.is_product_structured()) {
      throw UsageError("fast path needs a product-structured field");
    }
    if (j.contains("t_grid")) {
      const auto& g = j.at("t_grid");
      cfg.t_grid = stats::linear_grid(g.at("lo").get<double>(), g.at("hi").get<double>(),
                                      g.at("points").get<std::size_t>());
    } else {
      cfg.t_grid = stats::linear_grid(0.0, 3.0, 13);
    }
    for (const auto& c : j.value("comparisons", nlohmann::json::array())) {
      cfg.comparisons.push_back(detail::parse_comparison(c, cfg));
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

inline nlohmann::json to_json(const Comparison& c) {
  nlohmann::json j{{"mode", c.mode}, {"tolerance", c.tolerance}};
  if (c.law) j["law"] = limit::to_json(*c.law);
  if (c.draws) j["draws"] = c.draws;
  if (!c.t.empty()) j["t"] = c.t;
  if (c.mode == "variance") j["target"] = c.target;
  if (c.mode == "queue_condition") {
    j["lag"] = c.lag;
    j["expected"] = c.expected;
  }
  return j;
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json comparisons = nlohmann::json::array();
  for (const auto& c : cfg.comparisons) comparisons.push_back(to_json(c));
  return {{"name", cfg.name},
          {"field", fields::to_json(cfg.field)},
          {"window", cfg.window.lengths()},
          {"statistic", stats::to_string(cfg.statistic)},
          {"replicates", cfg.replicates},
          {"seed", cfg.seed},
          {"path", stats::to_string(cfg.path)},
          {"t_grid",
           {{"lo", cfg.t_grid.front()}, {"hi", cfg.t_grid.back()}, {"points", cfg.t_grid.size()}}},
          {"comparisons", comparisons}};
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace mdclt::cli
