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

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mdclt::exact {

// A bijection of {0, ..., n-1}, stored as its image array.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (auto y : image_) {
      if (y >= image_.size() || seen[y]) {
        throw std::invalid_argument("Permutation: image array is not a bijection");
      }
      seen[y] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> image(n);
    std::iota(image.begin(), image.end(), std::size_t{0});
    return Permutation(std::move(image));
  }

  // x -> (x + shift) mod n
  static Permutation rotation(std::size_t n, std::int64_t shift) {
    std::vector<std::size_t> image(n);
    const auto m = static_cast<std::int64_t>(n);
    for (std::size_t x = 0; x < n; ++x) {
      image[x] = static_cast<std::size_t>(((static_cast<std::int64_t>(x) + shift) % m + m) % m);
    }
    return Permutation(std::move(image));
  }

  std::size_t size() const { return image_.size(); }
  std::size_t operator()(std::size_t x) const { return image_[x]; }
  std::span<const std::size_t> image() const { return image_; }

  // (a * b)(x) = a(b(x))
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw std::invalid_argument("Permutation: size mismatch");
    std::vector<std::size_t> image(a.size());
    for (std::size_t x = 0; x < image.size(); ++x) image[x] = a.image_[b.image_[x]];
    return Permutation(std::move(image));
  }

  Permutation inverse() const {
    std::vector<std::size_t> image(image_.size());
    for (std::size_t x = 0; x < image_.size(); ++x) image[image_[x]] = x;
    return Permutation(std::move(image));
  }

  Permutation pow(std::int64_t k) const {
    Permutation base = k < 0 ? inverse() : *this;
    std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
    Permutation result = identity(size());
    while (e > 0) {
      if (e & 1U) result = result * base;
      base = base * base;
      e >>= 1U;
    }
    return result;
  }

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<std::size_t> image_;
};

// The partition {s^{-1}(B) : B block of p}: point x gets the label of s(x).
inline Partition pullback(const Partition& p, const Permutation& s) {
  if (p.size() != s.size()) throw std::invalid_argument("pullback: size mismatch");
  std::vector<std::size_t> labels(p.size());
  for (std::size_t x = 0; x < labels.size(); ++x) labels[x] = p.block_of(s(x));
  return Partition::from_labels(labels);
}

// s maps blocks of p onto blocks of p.
inline bool is_invariant(const Partition& p, const Permutation& s) {
  return pullback(p, s) == p;
}

inline bool preserves(const Permutation& s, const FiniteSpace& space) {
  if (s.size() != space.size()) return false;
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (space.weight(s(x)) != space.weight(x)) return false;
  }
  return true;
}

// A Z^d action on a finite point set, given by d pairwise commuting
// generators (generator k is the shift by the k-th unit vector).
class FiniteAction {
 public:
  explicit FiniteAction(std::vector<Permutation> generators)
      : generators_(std::move(generators)) {
    if (generators_.empty()) throw std::invalid_argument("FiniteAction: no generators");
    const auto n = generators_.front().size();
    for (const auto& g : generators_) {
      if (g.size() != n) throw std::invalid_argument("FiniteAction: generator size mismatch");
    }
    for (std::size_t a = 0; a < generators_.size(); ++a) {
      for (std::size_t b = a + 1; b < generators_.size(); ++b) {
        if (generators_[a] * generators_[b] != generators_[b] * generators_[a]) {
          throw std::invalid_argument("FiniteAction: generators " + std::to_string(a) +
                                      " and " + std::to_string(b) + " do not commute");
        }
      }
    }
  }

  std::size_t dimension() const { return generators_.size(); }
  std::size_t size() const { return generators_.front().size(); }
  const Permutation& generator(std::size_t k) const { return generators_.at(k); }
  std::span<const Permutation> generators() const { return generators_; }

  // T_{e_0 * g_0 + e_1 * g_1 + ...}
  Permutation element(std::span<const std::int64_t> exponents) const {
    if (exponents.size() != generators_.size()) {
      throw std::invalid_argument("FiniteAction: exponent vector has wrong length");
    }
    Permutation result = Permutation::identity(size());
    for (std::size_t k = 0; k < exponents.size(); ++k) {
      result = result * generators_[k].pow(exponents[k]);
    }
    return result;
  }

  bool preserves(const FiniteSpace& space) const {
    for (const auto& g : generators_) {
      if (!exact::preserves(g, space)) return false;
    }
    return true;
  }

  // All elements of the finite group generated by the chosen generators.
  std::vector<Permutation> group(std::span<const std::size_t> subset) const {
    std::set<Permutation> seen{Permutation::identity(size())};
    std::vector<Permutation> frontier(seen.begin(), seen.end());
    while (!frontier.empty()) {
      std::vector<Permutation> next;
      for (const auto& p : frontier) {
        for (auto k : subset) {
          auto q = generators_.at(k) * p;
          if (seen.insert(q).second) next.push_back(std::move(q));
        }
      }
      frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
  }

  std::vector<std::size_t> all_generators() const {
    std::vector<std::size_t> all(generators_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }

 private:
  std::vector<Permutation> generators_;
};

// Orbits of the subgroup generated by the chosen generators. This is the
// sigma-algebra of sets invariant under that sub-action.
inline Partition orbit_partition(const FiniteAction& action,
                                 std::span<const std::size_t> generator_subset) {
  if (generator_subset.empty()) {
    throw std::invalid_argument("orbit_partition: empty generator subset");
  }
  detail::DisjointSets sets(action.size());
  for (auto k : generator_subset) {
    const auto& g = action.generator(k);
    for (std::size_t x = 0; x < g.size(); ++x) sets.unite(x, g(x));
  }
  return Partition::from_labels(sets.labels());
}

inline Partition orbit_partition(const FiniteAction& action) {
  return orbit_partition(action, action.all_generators());
}

inline Partition orbit_partition(const Permutation& s) {
  return orbit_partition(FiniteAction({s}));
}

inline bool is_transitive(const FiniteAction& action) {
  return orbit_partition(action).block_count() == 1;
}

// Coarsest partition that refines p and is invariant under every generator:
// the join of all pullbacks of p along the group.
inline Partition invariant_hull(const Partition& p, const FiniteAction& action) {
  Partition out = p;
  for (const auto& g : action.group(action.all_generators())) {
    out = partition_join(out, pullback(p, g));
  }
  return out;
}

// Row-major index on a product of cyclic groups Z_{dims[0]} x ... ; the
// last coordinate varies fastest.
inline std::size_t grid_index(std::span<const std::size_t> dims,
                              std::span<const std::size_t> coords) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + coords[k];
  return idx;
}

inline std::vector<std::size_t> grid_coords(std::span<const std::size_t> dims, std::size_t idx) {
  std::vector<std::size_t> coords(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    coords[k] = idx % dims[k];
    idx /= dims[k];
  }
  return coords;
}

// Generator k rotates coordinate k by steps[k] on Z_{dims[0]} x ... x Z_{dims[d-1]}.
inline FiniteAction coordinate_rotations(std::span<const std::size_t> dims,
                                         std::span<const std::int64_t> steps) {
  if (dims.size() != steps.size()) {
    throw std::invalid_argument("coordinate_rotations: dims/steps length mismatch");
  }
  std::size_t n = 1;
  for (auto d : dims) {
    if (d == 0) throw std::invalid_argument("coordinate_rotations: zero dimension");
    n *= d;
  }
  std::vector<Permutation> gens;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    std::vector<std::size_t> image(n);
    const auto m = static_cast<std::int64_t>(dims[k]);
    for (std::size_t x = 0; x < n; ++x) {
      auto c = grid_coords(dims, x);
      c[k] = static_cast<std::size_t>(((static_cast<std::int64_t>(c[k]) + steps[k]) % m + m) % m);
      image[x] = grid_index(dims, c);
    }
    gens.emplace_back(std::move(image));
  }
  return FiniteAction(std::move(gens));
}

inline FiniteAction coordinate_rotations(std::span<const std::size_t> dims) {
  std::vector<std::int64_t> steps(dims.size(), 1);
  return coordinate_rotations(dims, steps);
}

}  // namespace mdclt::exact
