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

// Parities of the entries of M^n for the hyperbolic toral automorphism
// M = (3 1; 2 1), computed over the integers.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>

namespace mdclt::fields {

using BigMatrix2 = std::array<boost::multiprecision::cpp_int, 4>;  // (a b; c d)

inline BigMatrix2 multiply(const BigMatrix2& x, const BigMatrix2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

inline BigMatrix2 torus_matrix_power(std::uint64_t n) {
  BigMatrix2 result{1, 0, 0, 1};
  BigMatrix2 base{3, 1, 2, 1};
  while (n > 0) {
    if (n & 1U) result = multiply(result, base);
    base = multiply(base, base);
    n >>= 1U;
  }
  return result;
}

struct TorusParity {
  BigMatrix2 power;  // M^n
  bool a_odd = false;
  bool c_even = false;

  bool holds() const { return a_odd && c_even; }
};

inline TorusParity torus_parity(std::uint64_t n) {
  TorusParity p{torus_matrix_power(n)};
  p.a_odd = boost::multiprecision::bit_test(p.power[0], 0);
  p.c_even = !boost::multiprecision::bit_test(p.power[2], 0);
  return p;
}

}  // namespace mdclt::fields
