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

// Checks that the limit law of g + h is the convolution of the limit laws
// of g and h when the two parts use disjoint driver streams.

#pragma once

#include "mdclt/fields/generate.hpp"
#include "mdclt/limit/law.hpp"
#include "mdclt/stats/empirical.hpp"
#include "mdclt/stats/replicate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mdclt::stats {

// Characteristic function of the partial-sum limit, where known in closed
// form or by one-dimensional quadrature.
inline std::optional<double> reference_cf(const fields::FieldSpec& spec, double t) {
  using namespace fields;
  if (const auto* p = spec.as<ProductIid>()) return limit::cf_product_normals(t, p->d);
  if (spec.as<SignFlip>()) return limit::cf_product_normals(t, 2);
  if (spec.as<IidField>()) return std::exp(-0.5 * t * t);
  if (spec.as<ZeroField>()) return 1.0;
  if (const auto* c = spec.as<ChaosField>()) {
    if (c->tensor.terms().size() != 1) return std::nullopt;
    return limit::cf_limit(limit::ChaosProductLaw{c->tensor}, t);
  }
  if (const auto* c = spec.as<Composite>()) {
    const auto a = reference_cf(*c->g, t);
    const auto b = reference_cf(*c->h, t);
    if (!a || !b) return std::nullopt;
    return *a * *b;
  }
  return std::nullopt;
}

struct ConvolutionReport {
  std::vector<double> t;
  std::vector<double> composite;  // ecf of (g + h) sums
  std::vector<double> first;      // ecf of g sums
  std::vector<double> second;     // ecf of h sums
  std::vector<double> product;    // first * second
  std::vector<double> reference;  // closed form, empty when unknown
  double max_gap_product = 0.0;
  std::optional<double> max_gap_reference;
  std::vector<double> composite_samples;  // by replicate id
};

// One generic pass per replicate streams the rows of g and h and keeps
// three sums: g alone, h alone and the cellwise g + h.
inline ConvolutionReport convolution_check(const fields::FieldSpec& g, const fields::FieldSpec& h,
                                           const fields::Window& w, std::uint64_t replicates,
                                           const std::vector<double>& t_grid, std::uint64_t seed,
                                           unsigned threads = 1) {
  // Validates dimensions and stream disjointness.
  const auto composite = fields::FieldSpec::composite(g, h);
  if (composite.dimension() != w.dimension()) {
    throw std::invalid_argument("convolution_check: window dimension differs from the fields'");
  }
  if (replicates < 2 || replicates > 0xffffffffULL) {
    throw std::invalid_argument("convolution_check: need 2 <= R < 2^32");
  }
  const auto count = static_cast<std::uint32_t>(replicates);
  std::vector<double> sg(count), sh(count), sgh(count);
  const double scale = 1.0 / std::sqrt(static_cast<double>(w.cell_count()));
  parallel_for(count, threads, [&](std::uint32_t r) {
    fields::RowGenerator rg(g, w, seed, r);
    fields::RowGenerator rh(h, w, seed, r);
    double a = 0.0, b = 0.0, c = 0.0;
    for (std::uint64_t row = 0; row < w.row_count(); ++row) {
      const auto x = rg.row(row);
      const auto y = rh.row(row);
      for (std::size_t k = 0; k < x.size(); ++k) {
        a += x[k];
        b += y[k];
        c += x[k] + y[k];
      }
    }
    sg[r] = a * scale;
    sh[r] = b * scale;
    sgh[r] = c * scale;
  });
  ConvolutionReport rep;
  rep.t = t_grid;
  rep.composite_samples = sgh;
  const auto digest = fields::digest(composite);
  rep.composite = ecf(EmpiricalDist(std::move(sgh), digest), t_grid).cf;
  rep.first = ecf(EmpiricalDist(std::move(sg), fields::digest(g)), t_grid).cf;
  rep.second = ecf(EmpiricalDist(std::move(sh), fields::digest(h)), t_grid).cf;
  bool known = true;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    rep.product.push_back(rep.first[k] * rep.second[k]);
    rep.max_gap_product = std::max(rep.max_gap_product, std::abs(rep.composite[k] - rep.product[k]));
    const auto ref = reference_cf(composite, t_grid[k]);
    if (!ref) known = false;
    if (known) rep.reference.push_back(*ref);
  }
  if (known) {
    double gap = 0.0;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      gap = std::max(gap, std::abs(rep.composite[k] - rep.reference[k]));
    }
    rep.max_gap_reference = gap;
  } else {
    rep.reference.clear();
  }
  return rep;
}

}  // namespace mdclt::stats
