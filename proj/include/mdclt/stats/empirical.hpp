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

// Empirical distributions and goodness-of-fit distances.

#pragma once

#include "mdclt/fields/generate.hpp"
#include "mdclt/limit/law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace mdclt::stats {

class EmpiricalDist {
 public:
  EmpiricalDist() = default;

  explicit EmpiricalDist(std::vector<double> samples, std::uint64_t provenance = 0)
      : samples_(std::move(samples)), provenance_(provenance) {
    if (samples_.size() < 2) throw std::invalid_argument("EmpiricalDist: need at least 2 samples");
    for (double v : samples_) {
      if (std::isnan(v)) throw std::invalid_argument("EmpiricalDist: NaN sample");
    }
    std::sort(samples_.begin(), samples_.end());
  }

  const std::vector<double>& samples() const { return samples_; }
  std::size_t count() const { return samples_.size(); }
  std::uint64_t provenance() const { return provenance_; }

  // Fraction of samples <= x.
  double ecdf(double x) const {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
  }

 private:
  std::vector<double> samples_;
  std::uint64_t provenance_ = 0;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

inline Moments moments(const std::vector<double>& x) {
  if (x.size() < 2) throw std::invalid_argument("moments: need at least 2 samples");
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  Moments m;
  m.mean = mean;
  m.variance = m2 / (n - 1.0);
  const double pop = m2 / n;
  if (pop > 0.0) {
    m.skewness = (m3 / n) / std::pow(pop, 1.5);
    m.excess_kurtosis = (m4 / n) / (pop * pop) - 3.0;
  }
  return m;
}

inline Moments moments(const EmpiricalDist& d) { return moments(d.samples()); }

// (1 / sqrt(#cells)) * sum of all cells.
inline double partial_sum(const fields::Realization& r) {
  if (r.values.size() != r.window.cell_count()) {
    throw std::invalid_argument("partial_sum: value count differs from cell count");
  }
  double total = 0.0;
  for (double v : r.values) total += v;
  return total / std::sqrt(static_cast<double>(r.window.cell_count()));
}

// V = (1/m) sum_i ((1/sqrt n) sum_j X_{i,j})^2 on an m x n window, computed
// as (sum_i R_i^2 / n) / m from the row sums R_i.
inline double v_statistic_from_row_sums(const std::vector<double>& rows, std::uint64_t row_length) {
  double total = 0.0;
  for (double r : rows) total += r * r / static_cast<double>(row_length);
  return total / static_cast<double>(rows.size());
}

inline double v_statistic(const fields::Realization& r) {
  if (r.window.dimension() != 2) throw std::invalid_argument("v_statistic: window must be 2-d");
  const auto n = r.window.length(1);
  std::vector<double> rows(r.window.length(0), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::uint64_t j = 0; j < n; ++j) rows[i] += r.values[i * n + j];
  }
  return v_statistic_from_row_sums(rows, n);
}

// sup_x |F_a(x) - F_b(x)| over the two empirical distribution functions.
inline double ks_distance(const EmpiricalDist& a, const EmpiricalDist& b) {
  const auto& x = a.samples();
  const auto& y = b.samples();
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// sup_x |F_a(x) - F(x)| for a continuous reference distribution function.
inline double ks_distance(const EmpiricalDist& a, const std::function<double(double)>& cdf) {
  const auto& x = a.samples();
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    // Tied samples form one jump of the empirical function.
    std::size_t end = i;
    while (end < x.size() && x[end] == x[i]) ++end;
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(end) / n - f});
    i = end;
  }
  return d;
}

inline double ks_distance(const EmpiricalDist& a, const limit::LimitLaw& law) {
  limit::validate(law);
  // Fails early with UnsupportedLaw for laws without a distribution function.
  limit::cdf_limit(law, 0.0);
  return ks_distance(a, std::function<double(double)>(
                            [&law](double x) { return limit::cdf_limit(law, x); }));
}

// Chi-square with one degree of freedom: P(N^2 <= x).
inline double chi_square1_cdf(double x) { return x <= 0.0 ? 0.0 : std::erf(std::sqrt(0.5 * x)); }

// Empirical characteristic function: mean of cos(t x), with the mean of
// sin(t x) kept as a symmetry monitor.
inline limit::CFGrid ecf(const EmpiricalDist& a, const std::vector<double>& t_grid) {
  limit::CFGrid g{t_grid, {}, {}};
  const double n = static_cast<double>(a.count());
  for (double t : t_grid) {
    double c = 0.0, s = 0.0;
    for (double v : a.samples()) {
      c += std::cos(t * v);
      s += std::sin(t * v);
    }
    g.cf.push_back(c / n);
    g.imag.push_back(s / n);
  }
  return g;
}

// Evenly spaced grid lo, ..., hi with `points` entries.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw std::invalid_argument("linear_grid: need at least 2 points");
  std::vector<double> t(points);
  for (std::size_t k = 0; k < points; ++k) {
    t[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return t;
}

}  // namespace mdclt::stats
