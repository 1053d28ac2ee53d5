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

#include "mdclt/exact/finite_space.hpp"
#include "mdclt/exact/partition.hpp"
#include "mdclt/exact/rational.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mdclt::exact {

namespace detail {

inline void require_host(const FiniteSpace& space, std::size_t n, const char* what) {
  if (space.size() != n) {
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(space.size()) + " points, got " +
                                std::to_string(n));
  }
}

}  // namespace detail

// E[f | sigma(p)]: on each block, the weight-average of f over the block.
inline RationalVector cond_exp(const FiniteSpace& space, std::span<const Rational> f,
                               const Partition& p) {
  detail::require_host(space, f.size(), "cond_exp(f)");
  detail::require_host(space, p.size(), "cond_exp(partition)");
  RationalVector mass(p.block_count());
  RationalVector moment(p.block_count());
  for (std::size_t x = 0; x < f.size(); ++x) {
    mass[p.block_of(x)] += space.weight(x);
    moment[p.block_of(x)] += space.weight(x) * f[x];
  }
  for (std::size_t b = 0; b < mass.size(); ++b) {
    // Unreachable with FiniteSpace's positive weights; kept for hand-built spaces.
    if (mass[b] == 0) throw std::domain_error("cond_exp: block of zero weight");
    moment[b] /= mass[b];
  }
  RationalVector out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = moment[p.block_of(x)];
  return out;
}

inline RationalVector cond_exp(const FiniteSpace& space, const RationalVector& f,
                               const Partition& p) {
  return cond_exp(space, std::span<const Rational>(f), p);
}

// Constant on every block of p (exact equality).
inline bool is_measurable(std::span<const Rational> f, const Partition& p) {
  if (f.size() != p.size()) throw std::invalid_argument("is_measurable: size mismatch");
  std::vector<const Rational*> value(p.block_count(), nullptr);
  for (std::size_t x = 0; x < f.size(); ++x) {
    auto& v = value[p.block_of(x)];
    if (v == nullptr) {
      v = &f[x];
    } else if (*v != f[x]) {
      return false;
    }
  }
  return true;
}

inline Rational expectation(const FiniteSpace& space, std::span<const Rational> f) {
  detail::require_host(space, f.size(), "expectation");
  Rational total = 0;
  for (std::size_t x = 0; x < f.size(); ++x) total += space.weight(x) * f[x];
  return total;
}

inline Rational norm_squared(const FiniteSpace& space, std::span<const Rational> f) {
  detail::require_host(space, f.size(), "norm_squared");
  Rational total = 0;
  for (std::size_t x = 0; x < f.size(); ++x) total += space.weight(x) * f[x] * f[x];
  return total;
}

inline RationalVector point_indicator(std::size_t n, std::size_t point) {
  RationalVector f(n, Rational(0));
  f.at(point) = 1;
  return f;
}

inline RationalVector block_indicator(const Partition& p, std::size_t block) {
  RationalVector f(p.size(), Rational(0));
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p.block_of(x) == block) f[x] = 1;
  }
  return f;
}

inline Rational measure(const FiniteSpace& space, const Partition& p, std::size_t block) {
  Rational total = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p.block_of(x) == block) total += space.weight(x);
  }
  return total;
}

}  // namespace mdclt::exact
