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

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mdclt::numeric {

// n-point Gauss-Hermite rule for the standard normal law: sum_k w_k g(x_k)
// approximates E[g(N)], and the weights add up to 1. Nodes are stored in
// mirrored pairs: x[2k] = -x[2k+1] > 0, plus a trailing 0 when n is odd,
// so odd integrands sum to exactly zero when accumulated pairwise.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double expect(F&& g) const {
    double total = 0.0;
    std::size_t k = 0;
    for (; k + 1 < nodes.size(); k += 2) total += weights[k] * (g(nodes[k]) + g(nodes[k + 1]));
    if (k < nodes.size()) total += weights[k] * g(nodes[k]);
    return total;
  }
};

// Newton iteration on the orthonormal Hermite recurrence (weight e^{-x^2}),
// then rescaled to the standard normal law.
inline GaussHermiteRule gauss_hermite(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_hermite: need at least one node");
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  const std::size_t m = (n + 1) / 2;
  std::vector<double> x(m), w(m);
  double z = 0.0;
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * dn + 1.0) - 1.85575 * std::pow(2.0 * dn + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(dn, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double dj = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / dj) * p2 - std::sqrt((dj - 1.0) / dj) * p3;
      }
      pp = std::sqrt(2.0 * dn) * p2;
      const double step = p1 / pp;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    w[i] = 2.0 / (pp * pp);
  }
  GaussHermiteRule rule;
  const double scale = std::numbers::sqrt2;
  const double wscale = 1.0 / std::sqrt(std::numbers::pi);
  for (std::size_t i = 0; i < n / 2; ++i) {
    rule.nodes.push_back(scale * x[i]);
    rule.nodes.push_back(-scale * x[i]);
    rule.weights.push_back(wscale * w[i]);
    rule.weights.push_back(wscale * w[i]);
  }
  if (n % 2 == 1) {
    rule.nodes.push_back(0.0);
    rule.weights.push_back(wscale * w[m - 1]);
  }
  return rule;
}

}  // namespace mdclt::numeric
