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

// Monte Carlo replicates of the normalized partial sum and of the row
// statistic V. Product-structured specs have an O(l+m+n) path that only
// draws the axis sequences; every spec has the O(cells) generic path that
// streams the realization row by row.

#pragma once

#include "mdclt/fields/generate.hpp"
#include "mdclt/stats/empirical.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mdclt::stats {

enum class StatisticKind { PartialSum, VStatistic };
enum class PathMode { Auto, Fast, Generic };

inline const char* to_string(StatisticKind k) {
  return k == StatisticKind::PartialSum ? "partial_sum" : "v_statistic";
}

inline StatisticKind statistic_from_string(const std::string& s) {
  if (s == "partial_sum") return StatisticKind::PartialSum;
  if (s == "v_statistic") return StatisticKind::VStatistic;
  throw std::invalid_argument("unknown statistic '" + s + "'");
}

inline const char* to_string(PathMode p) {
  switch (p) {
    case PathMode::Auto: return "auto";
    case PathMode::Fast: return "fast";
    case PathMode::Generic: return "generic";
  }
  return "auto";
}

inline PathMode path_from_string(const std::string& s) {
  if (s == "auto") return PathMode::Auto;
  if (s == "fast") return PathMode::Fast;
  if (s == "generic") return PathMode::Generic;
  throw std::invalid_argument("unknown path '" + s + "'");
}

namespace detail {

inline double sum_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Sums over slabs {i} x (all other axes), from the axis sequences alone.
inline std::vector<double> factorized_slab_sums(const fields::FieldSpec& spec,
                                                const fields::Window& w,
                                                const fields::CounterRng& rng,
                                                std::uint32_t rep) {
  using namespace fields;
  const auto l = w.length(0);
  std::vector<double> slabs(l, 0.0);
  auto stream = [&](std::size_t k) { return spec.stream_base() + static_cast<std::uint32_t>(k); };
  if (spec.as<ProductIid>()) {
    const auto u = axis_drivers(rng, spec.driver(), stream(0), rep, l);
    double rest = 1.0;
    for (std::size_t k = 1; k < w.dimension(); ++k) {
      rest *= sum_of(axis_drivers(rng, spec.driver(), stream(k), rep, w.length(k)));
    }
    for (std::uint64_t i = 0; i < l; ++i) slabs[i] = u[i] * rest;
  } else if (const auto* c = spec.as<ChaosField>()) {
    std::vector<HermiteTable> tables;
    for (std::size_t k = 0; k < w.dimension(); ++k) {
      tables.push_back(hermite_table(axis_drivers(rng, spec.driver(), stream(k), rep, w.length(k)),
                                     c->tensor.max_index(k)));
    }
    for (const auto& t : c->tensor.terms()) {
      double coeff = t.lambda;
      for (std::size_t k = 1; k < w.dimension(); ++k) coeff *= sum_of(tables[k][t.index[k] - 1]);
      const auto& first = tables[0][t.index[0] - 1];
      for (std::uint64_t i = 0; i < l; ++i) slabs[i] += coeff * first[i];
    }
  } else if (spec.as<SignFlip>()) {
    const auto x = axis_drivers(rng, Driver::Rademacher, stream(0), rep, l);
    const auto y = axis_drivers(rng, Driver::Rademacher, stream(1), rep, w.length(1));
    const double z = signflip_z(rng, spec.stream_base(), rep);
    // (-1)^{i+j} with one-based i, j has the parity of the zero-based sum.
    double b = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) b += (j & 1U) ? -y[j] : y[j];
    for (std::uint64_t i = 0; i < l; ++i) slabs[i] = ((i & 1U) ? -x[i] : x[i]) * z * b;
  } else if (spec.as<ZeroField>()) {
  } else if (const auto* c = spec.as<Composite>()) {
    const auto g = factorized_slab_sums(*c->g, w, rng, rep);
    const auto h = factorized_slab_sums(*c->h, w, rng, rep);
    for (std::uint64_t i = 0; i < l; ++i) slabs[i] = g[i] + h[i];
  } else {
    throw std::invalid_argument("no factorized path for field kind '" + spec.tag() + "'");
  }
  return slabs;
}

// Row sums (last axis summed), row-major over the leading axes.
inline std::vector<double> generic_row_sums(const fields::FieldSpec& spec, const fields::Window& w,
                                            std::uint64_t seed, std::uint32_t rep) {
  fields::RowGenerator gen(spec, w, seed, rep);
  std::vector<double> rows(w.row_count());
  for (std::uint64_t r = 0; r < rows.size(); ++r) {
    double s = 0.0;
    for (double v : gen.row(r)) s += v;
    rows[r] = s;
  }
  return rows;
}

}  // namespace detail

inline bool use_fast_path(const fields::FieldSpec& spec, PathMode mode) {
  if (mode == PathMode::Generic) return false;
  if (mode == PathMode::Fast && !spec.is_product_structured()) {
    throw std::invalid_argument("fast path requested for non-factorizable field kind '" +
                                spec.tag() + "'");
  }
  return spec.is_product_structured();
}

// One replicate's statistic. Both paths reduce to the same slab sums, in
// the same order, when cells are integers (Rademacher drivers), and then
// agree bit for bit.
inline double replicate_statistic(const fields::FieldSpec& spec, const fields::Window& w,
                                  StatisticKind kind, std::uint64_t seed, std::uint32_t rep,
                                  PathMode mode = PathMode::Auto) {
  if (spec.dimension() != w.dimension()) {
    throw std::invalid_argument("field spec and window differ in dimension");
  }
  if (kind == StatisticKind::VStatistic && w.dimension() != 2) {
    throw std::invalid_argument("v_statistic: window must be 2-d");
  }
  std::vector<double> slabs;
  if (use_fast_path(spec, mode)) {
    slabs = detail::factorized_slab_sums(spec, w, fields::CounterRng(seed), rep);
  } else {
    const auto rows = detail::generic_row_sums(spec, w, seed, rep);
    const auto per_slab = rows.size() / w.length(0);
    slabs.assign(w.length(0), 0.0);
    for (std::uint64_t i = 0; i < slabs.size(); ++i) {
      for (std::uint64_t k = 0; k < per_slab; ++k) slabs[i] += rows[i * per_slab + k];
    }
  }
  if (kind == StatisticKind::VStatistic) return v_statistic_from_row_sums(slabs, w.length(1));
  return detail::sum_of(slabs) / std::sqrt(static_cast<double>(w.cell_count()));
}

// Runs f(r) for r in [0, count) on up to `threads` workers. Results are
// keyed by r, so the schedule never changes them.
template <class F>
void parallel_for(std::uint32_t count, unsigned threads, F&& f) {
  threads = std::max(1U, std::min<unsigned>(threads, count));
  if (threads == 1) {
    for (std::uint32_t r = 0; r < count; ++r) f(r);
    return;
  }
  std::atomic<std::uint32_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::uint32_t r = next++; r < count && !failed; r = next++) f(r);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct SumReport {
  nlohmann::json spec;
  std::uint64_t spec_digest = 0;
  fields::Window window;
  std::uint32_t replicates = 0;
  std::uint64_t seed = 0;
  StatisticKind statistic = StatisticKind::PartialSum;
  PathMode path = PathMode::Auto;  // path actually taken
  std::vector<double> raw;         // by replicate id
  EmpiricalDist dist;
  Moments summary;
};

inline SumReport replicate_stats(const fields::FieldSpec& spec, const fields::Window& w,
                                 StatisticKind kind, std::uint64_t replicates, std::uint64_t seed,
                                 unsigned threads = 1, PathMode mode = PathMode::Auto) {
  if (replicates < 2) throw std::invalid_argument("replicate_stats: need R >= 2");
  if (replicates > std::numeric_limits<std::uint32_t>::max()) {
    throw std::overflow_error("replicate_stats: replicate ids are 32-bit");
  }
  if (spec.dimension() != w.dimension()) {
    throw std::invalid_argument("replicate_stats: field spec and window differ in dimension");
  }
  const auto count = static_cast<std::uint32_t>(replicates);
  const PathMode taken = use_fast_path(spec, mode) ? PathMode::Fast : PathMode::Generic;
  std::vector<double> raw(count);
  parallel_for(count, threads, [&](std::uint32_t r) {
    raw[r] = replicate_statistic(spec, w, kind, seed, r, taken);
  });
  SumReport rep;
  rep.spec = fields::to_json(spec);
  rep.spec_digest = fields::digest(spec);
  rep.window = w;
  rep.replicates = count;
  rep.seed = seed;
  rep.statistic = kind;
  rep.path = taken;
  rep.raw = raw;
  rep.dist = EmpiricalDist(std::move(raw), rep.spec_digest);
  rep.summary = moments(rep.dist);
  return rep;
}

}  // namespace mdclt::stats
