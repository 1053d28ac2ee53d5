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

// Built-in experiments, one per example field. configs/<name>.json holds
// the same objects for use with --config.

#pragma once

#include "mdclt/cli/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mdclt::cli {

inline constexpr std::uint64_t kDefaultSeed = 20261016;

inline nlohmann::json preset_json(const std::string& name) {
  using nlohmann::json;
  const json pon2 = {{"law", "product_of_normals"}, {"d", 2}};
  const json ecf_pon2 = {{"mode", "ecf"}, {"law", pon2}, {"t", {0.5, 1.0, 2.0}}, {"tolerance", 0.02}};
  const json two_terms = json::array({{{"index", {1, 1, 1}}, {"lambda", 0.6}},
                                      {{"index", {2, 2, 2}}, {"lambda", 0.8}}});
  json j;
  if (name == "product-iid-2d") {
    j = {{"field", {{"kind", "product_iid"}, {"d", 2}}},
         {"window", {256, 256}},
         {"replicates", 20000},
         {"comparisons", {{{"mode", "ks"}, {"law", pon2}, {"tolerance", 0.02}}, ecf_pon2}}};
  } else if (name == "product-iid-3d") {
    j = {{"field", {{"kind", "product_iid"}, {"d", 3}}},
         {"window", {256, 256, 256}},
         {"replicates", 20000},
         {"path", "fast"},
         {"comparisons",
          {{{"mode", "ks_two_sample"},
            {"law", {{"law", "chaos_product"}, {"d", 3}, {"terms", {{{"index", {1, 1, 1}}, {"lambda", 1.0}}}}}},
            {"draws", 200000},
            {"tolerance", 0.02}}}}};
  } else if (name == "chaos-2term") {
    j = {{"field", {{"kind", "chaos"}, {"d", 3}, {"terms", two_terms}}},
         {"window", {128, 128, 128}},
         {"replicates", 10000},
         {"comparisons",
          {{{"mode", "variance"}, {"target", 1.0}, {"tolerance", 0.05}},
           {{"mode", "variance"},
            {"target", 1.0},
            {"law", {{"law", "chaos_product"}, {"d", 3}, {"terms", two_terms}}},
            {"draws", 10000},
            {"tolerance", 0.05}}}}};
  } else if (name == "bessel") {
    j = {{"field", {{"kind", "signflip"}}},
         {"window", {256, 256}},
         {"replicates", 20000},
         {"comparisons", {{{"mode", "ks"}, {"law", pon2}, {"tolerance", 0.02}}, ecf_pon2}}};
  } else if (name == "normal-baseline") {
    j = {{"field", {{"kind", "iid"}, {"d", 2}}},
         {"window", {256, 256}},
         {"replicates", 20000},
         {"comparisons",
          {{{"mode", "ks"}, {"law", {{"law", "normal"}, {"variance", 1.0}}}, {"tolerance", 0.02}},
           {{"mode", "queue_condition"}, {"lag", 1}, {"expected", 0.0}, {"tolerance", 0.0}}}}};
  } else if (name == "convolution") {
    j = {{"field",
          {{"kind", "composite"},
           {"g", {{"kind", "product_iid"}, {"d", 2}, {"stream", 0}}},
           {"h", {{"kind", "iid"}, {"d", 2}, {"stream", 16}}}}},
         {"window", {256, 256}},
         {"replicates", 20000},
         {"t_grid", {{"lo", 0.0}, {"hi", 3.0}, {"points", 13}}},
         {"comparisons", {{{"mode", "convolution"}, {"tolerance", 0.02}}}}};
  } else if (name == "eta-square") {
    j = {{"field", {{"kind", "product_iid"}, {"d", 2}}},
         {"window", {256, 256}},
         {"statistic", "v_statistic"},
         {"replicates", 10000},
         {"comparisons", {{{"mode", "ks_chi_square1"}, {"tolerance", 0.03}}}}};
  } else {
    throw UsageError("unknown preset '" + name + "'");
  }
  j["name"] = name;
  j["seed"] = kDefaultSeed;
  return j;
}

inline std::vector<std::string> preset_names() {
  return {"product-iid-2d", "product-iid-3d", "chaos-2term", "bessel",
          "normal-baseline", "convolution",   "eta-square"};
}

inline ExperimentConfig preset(const std::string& name) { return parse_config(preset_json(name)); }

}  // namespace mdclt::cli
