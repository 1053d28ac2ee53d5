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

// The truncation f -> f_C of a local field, and independent numerical
// checks of what it promises: the martingale condition in both axes and
// the L2 bound against the tail f 1{|f| > C}.

#pragma once

#include "mdclt/fields/generate.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mdclt::stats {

inline constexpr double kNodeDoublingTolerance = 1e-9;

namespace detail {

inline const std::vector<double>& probe_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    for (int k = -16; k <= 16; ++k) g.push_back(0.3 * k + 0.017);
    return g;
  }();
  return grid;
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// E[phi(N)] over the real line, split at -a, a (a > 0) where the kernel
// jumps; plain split at 0 when a is infinite.
template <class F>
double gaussian_expect(F&& fn, double a) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double inf = std::numeric_limits<double>::infinity();
  auto w = [&](double x) { return fn(x) * normal_pdf(x); };
  constexpr unsigned depth = 15;
  constexpr double tol = 1e-13;
  if (!std::isfinite(a)) return GK::integrate(w, -inf, 0.0, depth, tol) + GK::integrate(w, 0.0, inf, depth, tol);
  return GK::integrate(w, -inf, -a, depth, tol) + GK::integrate(w, -a, 0.0, depth, tol) +
         GK::integrate(w, 0.0, a, depth, tol) + GK::integrate(w, a, inf, depth, tol);
}

inline const fields::Truncated& truncated_of(const fields::FieldSpec& spec) {
  const auto* t = spec.as<fields::Truncated>();
  if (t == nullptr) throw std::invalid_argument("expected a truncated field spec");
  return *t;
}

// Values of the sign coordinate w that a cell can see.
inline std::vector<double> sign_values(const fields::Truncated& t) {
  return t.base->as<fields::SignFlip>() ? std::vector<double>{1.0, -1.0} : std::vector<double>{1.0};
}

}  // namespace detail

// f_C for a local spec: cell value depends only on one driver per axis
// (product_iid with d = 2, or signflip). Throws std::invalid_argument for
// any other spec, and std::runtime_error if doubling the quadrature nodes
// moves f_C by 1e-9 or more on the probe grid.
inline fields::FieldSpec truncate_fC(const fields::FieldSpec& spec, double C,
                                     std::size_t nodes = 64) {
  if (nodes < 64) throw std::invalid_argument("truncate_fC: need at least 64 nodes");
  fields::Truncated t{std::make_shared<const fields::FieldSpec>(spec), C, nodes};
  fields::FieldSpec out(t, spec.driver(), spec.stream_base());
  if (spec.driver() == fields::Driver::Gaussian) {
    const fields::TruncatedKernel coarse(t);
    const fields::TruncatedKernel fine(fields::Truncated{t.base, C, 2 * nodes});
    for (double w : detail::sign_values(t)) {
      for (double u : detail::probe_grid()) {
        for (double v : detail::probe_grid()) {
          if (std::abs(coarse(u, v, w) - fine(u, v, w)) >= kNodeDoublingTolerance) {
            throw std::runtime_error("truncate_fC: quadrature not converged at C = " +
                                     std::to_string(C));
          }
        }
      }
    }
  }
  return out;
}

// max over the probe grid (or all driver values) and both axes of
// |E[f_C | the other coordinates]|, integrating each axis independently of
// the kernel's own rule: adaptive Gauss-Kronrod split at the jumps of the
// indicator for Gaussian drivers, enumeration for Rademacher drivers.
inline double martingale_residual(const fields::FieldSpec& truncated) {
  const auto& t = detail::truncated_of(truncated);
  const fields::TruncatedKernel kernel(t);
  double worst = 0.0;
  const bool gaussian = t.base->driver() == fields::Driver::Gaussian;
  const std::vector<double> fixed = gaussian ? detail::probe_grid() : std::vector<double>{1.0, -1.0};
  for (double w : detail::sign_values(t)) {
    for (double other : fixed) {
      double first = 0.0, second = 0.0;
      if (gaussian) {
        const double a = other == 0.0 ? std::numeric_limits<double>::infinity() : t.C / std::abs(other);
        first = detail::gaussian_expect([&](double u) { return kernel(u, other, w); }, a);
        second = detail::gaussian_expect([&](double v) { return kernel(other, v, w); }, a);
      } else {
        for (double s : {1.0, -1.0}) {
          first += 0.5 * kernel(s, other, w);
          second += 0.5 * kernel(other, s, w);
        }
      }
      worst = std::max({worst, std::abs(first), std::abs(second)});
    }
  }
  return worst;
}

struct TruncationNorms {
  double difference = 0.0;  // ||f - f_C||_2
  double tail = 0.0;        // ||f 1{|f| > C}||_2
};

// Two separate routes: the difference integrates (f - f_C)^2 through the
// kernel; the tail uses E[u^2 1{|u| > a}] = 2 (a phi(a) + Q(a)) inside a
// single outer integral.
inline TruncationNorms truncation_norms(const fields::FieldSpec& truncated) {
  const auto& t = detail::truncated_of(truncated);
  const fields::TruncatedKernel kernel(t);
  TruncationNorms out;
  if (t.base->driver() == fields::Driver::Rademacher) {
    const auto ws = detail::sign_values(t);
    double diff = 0.0, tail = 0.0;
    const double p = 0.25 / static_cast<double>(ws.size());
    for (double w : ws) {
      for (double u : {1.0, -1.0}) {
        for (double v : {1.0, -1.0}) {
          const double f = u * v * w;
          diff += p * (f - kernel(u, v, w)) * (f - kernel(u, v, w));
          tail += p * (std::abs(f) > t.C ? f * f : 0.0);
        }
      }
    }
    out.difference = std::sqrt(diff);
    out.tail = std::sqrt(tail);
    return out;
  }
  const double C = t.C;
  auto inner_diff = [&](double v) {
    const double a = v == 0.0 ? std::numeric_limits<double>::infinity() : C / std::abs(v);
    return detail::gaussian_expect(
        [&](double u) {
          const double e = u * v - kernel(u, v, 1.0);
          return e * e;
        },
        a);
  };
  out.difference = std::sqrt(detail::gaussian_expect(inner_diff, std::numeric_limits<double>::infinity()));
  auto inner_tail = [&](double v) {
    if (v == 0.0) return 0.0;
    const double a = C / std::abs(v);
    return v * v * 2.0 * (a * detail::normal_pdf(a) + 0.5 * std::erfc(a / std::numbers::sqrt2));
  };
  out.tail = std::sqrt(detail::gaussian_expect(inner_tail, std::numeric_limits<double>::infinity()));
  return out;
}

}  // namespace mdclt::stats
