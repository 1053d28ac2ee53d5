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

// Loading exact-algebra fixtures from JSON and running them.
//
// A fixture is one JSON object:
//
//   {
//     "name": "torus-6x4",
//     "check": "prop_pro" | "independence" | "lemma_class" | "completely_commuting",
//     "points": 24,
//     "weights": ["1/24", ...],          // optional, uniform when absent
//     "generators": [[1, 2, 0, ...], ...],  // permutations as image arrays
//     "F": [...], "C": [...],            // prop_pro: partitions as label arrays
//     "permutation": [...], "base": [...],  // lemma_class
//     "generate_past": true,             // lemma_class: base := past generated by base
//     "grid": {"origin": [0, 0], "extent": [2, 2], "cells": [[...], ...]}
//   }

#pragma once

#include "mdclt/error.hpp"
#include "mdclt/exact/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdclt::exact {

struct FixtureOutcome {
  std::string name;
  std::string check;
  std::vector<IdentityResult> results;

  bool passed() const { return all_pass(results); }
};

class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::size_t> read_indices(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw FixtureError(std::string(what) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) {
      throw FixtureError(std::string(what) + " must contain non-negative integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

inline Partition read_partition(const nlohmann::json& j, std::size_t n, const char* what) {
  auto labels = read_indices(j, what);
  if (labels.size() != n) {
    throw FixtureError(std::string(what) + " has " + std::to_string(labels.size()) +
                       " labels for " + std::to_string(n) + " points");
  }
  return Partition::from_labels(labels);
}

inline Permutation read_permutation(const nlohmann::json& j, std::size_t n) {
  auto image = read_indices(j, "permutation");
  if (image.size() != n) throw FixtureError("permutation has the wrong length");
  return Permutation(std::move(image));
}

inline FiniteSpace read_space(const nlohmann::json& j) {
  const auto n = j.at("points").get<std::size_t>();
  if (!j.contains("weights")) return FiniteSpace::uniform(n);
  RationalVector w;
  for (const auto& v : j.at("weights")) w.push_back(parse_rational(v.get<std::string>()));
  if (w.size() != n) throw FixtureError("weights: expected " + std::to_string(n) + " entries");
  return FiniteSpace(std::move(w));
}

inline FiniteAction read_action(const nlohmann::json& j, std::size_t n) {
  std::vector<Permutation> gens;
  for (const auto& g : j.at("generators")) gens.push_back(read_permutation(g, n));
  return FiniteAction(std::move(gens));
}

}  // namespace detail

inline FixtureOutcome run_fixture(const nlohmann::json& j) {
  FixtureOutcome out;
  try {
    out.name = j.at("name").get<std::string>();
    out.check = j.at("check").get<std::string>();
    const auto space = detail::read_space(j);
    const auto n = space.size();
    if (out.check == "prop_pro") {
      out.results = verify_prop_pro(space, detail::read_action(j, n),
                                    detail::read_partition(j.at("F"), n, "F"),
                                    detail::read_partition(j.at("C"), n, "C"));
    } else if (out.check == "independence") {
      out.results = {verify_independence(space, detail::read_action(j, n))};
    } else if (out.check == "lemma_class") {
      const auto s = detail::read_permutation(j.at("permutation"), n);
      auto base = detail::read_partition(j.at("base"), n, "base");
      if (j.value("generate_past", false)) base = generated_past(base, s);
      out.results = {verify_lemma_class(space, s, base)};
    } else if (out.check == "completely_commuting") {
      const auto& g = j.at("grid");
      std::vector<Partition> cells;
      for (const auto& c : g.at("cells")) cells.push_back(detail::read_partition(c, n, "cell"));
      FiltrationGrid grid(g.at("origin").get<GridIndex>(),
                          g.at("extent").get<std::vector<std::size_t>>(), std::move(cells));
      out.results = {verify_completely_commuting(space, grid)};
      if (j.contains("generators")) {
        const auto action = detail::read_action(j, n);
        IdentityResult stat{"F_a = T_{-a} F_0 (stationarity)"};
        if (auto bad = find_stationarity_violation(grid, action)) {
          stat.status = Status::Fail;
          stat.witness = "cell " + format_index(*bad);
        }
        out.results.push_back(std::move(stat));
      }
    } else {
      throw FixtureError("unknown check '" + out.check + "'");
    }
  } catch (const PreconditionError& e) {
    out.results = {{"hypotheses", Status::PreconditionFailed, std::string(e.what())}};
  } catch (const FixtureError&) {
    throw;
  } catch (const std::exception& e) {
    throw FixtureError("fixture '" + out.name + "': " + e.what());
  }
  return out;
}

inline nlohmann::json to_json(const FixtureOutcome& outcome) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& r : outcome.results) {
    nlohmann::json item{{"identity", r.identity}, {"status", to_string(r.status)}};
    if (r.witness) item["witness"] = *r.witness;
    results.push_back(std::move(item));
  }
  return {{"fixture", outcome.name}, {"check", outcome.check}, {"results", results}};
}

// Every *.json file in the directory, in file-name order. Each file holds a
// fixture object or an array of them.
inline std::vector<FixtureOutcome> run_fixture_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw FixtureError("fixture directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (files.empty()) throw FixtureError("no fixtures in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<FixtureOutcome> outcomes;
  for (const auto& file : files) {
    std::ifstream in(file);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw FixtureError(file.filename().string() + ": " + e.what());
    }
    if (doc.is_array()) {
      for (const auto& item : doc) outcomes.push_back(run_fixture(item));
    } else {
      outcomes.push_back(run_fixture(doc));
    }
  }
  return outcomes;
}

}  // namespace mdclt::exact
