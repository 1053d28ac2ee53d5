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
#include <stdexcept>
#include <vector>

namespace mdclt::fields {

// Values h_0(x), ..., h_n(x) of the probabilists' Hermite polynomials
// normalized in L2 of the standard normal law:
//   h_{k+1}(x) = (x h_k(x) - sqrt(k) h_{k-1}(x)) / sqrt(k + 1).
inline void hermite_orthonormal_all(std::size_t n, double x, std::vector<double>& out) {
  out.resize(n + 1);
  out[0] = 1.0;
  if (n == 0) return;
  out[1] = x;
  for (std::size_t k = 1; k < n; ++k) {
    out[k + 1] = (x * out[k] - std::sqrt(static_cast<double>(k)) * out[k - 1]) /
                 std::sqrt(static_cast<double>(k + 1));
  }
}

// h_a(x) for a >= 1. The constant h_0 is not part of the martingale basis.
inline double hermite_orthonormal(std::size_t a, double x) {
  if (a == 0) throw std::invalid_argument("hermite_orthonormal: index must be >= 1");
  double prev = 1.0;
  double cur = x;
  for (std::size_t k = 1; k < a; ++k) {
    const double next =
        (x * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace mdclt::fields
