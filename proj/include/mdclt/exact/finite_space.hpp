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

#include "mdclt/exact/rational.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mdclt::exact {

// A probability space on the points {0, ..., size()-1} with exact rational
// weights. Every weight is strictly positive and the weights sum to one.
class FiniteSpace {
 public:
  explicit FiniteSpace(RationalVector weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("FiniteSpace: no points");
    Rational total = 0;
    for (const auto& w : weights_) {
      if (w <= 0) throw std::invalid_argument("FiniteSpace: weights must be positive");
      total += w;
    }
    if (total != 1) {
      throw std::invalid_argument("FiniteSpace: weights sum to " + to_string(total) +
                                  ", not 1");
    }
  }

  static FiniteSpace uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("FiniteSpace: no points");
    return FiniteSpace(RationalVector(n, Rational(1, static_cast<long long>(n))));
  }

  // Product measure; point (i, j) has index i * b.size() + j.
  static FiniteSpace product(const FiniteSpace& a, const FiniteSpace& b) {
    RationalVector w;
    w.reserve(a.size() * b.size());
    for (const auto& wa : a.weights_) {
      for (const auto& wb : b.weights_) w.push_back(wa * wb);
    }
    return FiniteSpace(std::move(w));
  }

  std::size_t size() const { return weights_.size(); }
  const Rational& weight(std::size_t i) const { return weights_.at(i); }
  std::span<const Rational> weights() const { return weights_; }

  bool operator==(const FiniteSpace&) const = default;

 private:
  RationalVector weights_;
};

}  // namespace mdclt::exact
