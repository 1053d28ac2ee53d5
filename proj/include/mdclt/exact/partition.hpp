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

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mdclt::exact {

// A finite sigma-algebra, stored as the partition into its atoms.
//
// Labels are kept canonical: blocks are numbered 0, 1, ... in order of
// first appearance, so two Partition values compare equal exactly when they
// describe the same sigma-algebra.
class Partition {
 public:
  Partition() = default;

  // Accepts arbitrary labels and renumbers them canonically.
  static Partition from_labels(std::span<const std::size_t> labels) {
    if (labels.empty()) throw std::invalid_argument("Partition: empty point set");
    Partition p;
    p.labels_.resize(labels.size());
    std::map<std::size_t, std::size_t> rename;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, inserted] = rename.try_emplace(labels[i], rename.size());
      p.labels_[i] = it->second;
    }
    p.block_count_ = rename.size();
    return p;
  }

  static Partition from_labels(const std::vector<std::size_t>& labels) {
    return from_labels(std::span<const std::size_t>(labels));
  }

  static Partition from_blocks(std::size_t n,
                               const std::vector<std::vector<std::size_t>>& blocks) {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> labels(n, unset);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw std::invalid_argument("Partition: empty block");
      for (auto x : blocks[b]) {
        if (x >= n) throw std::invalid_argument("Partition: point out of range");
        if (labels[x] != unset) throw std::invalid_argument("Partition: overlapping blocks");
        labels[x] = b;
      }
    }
    for (auto l : labels) {
      if (l == unset) throw std::invalid_argument("Partition: blocks do not cover the space");
    }
    return from_labels(labels);
  }

  static Partition trivial(std::size_t n) {
    return from_labels(std::vector<std::size_t>(n, 0));
  }

  static Partition discrete(std::size_t n) {
    std::vector<std::size_t> labels(n);
    std::iota(labels.begin(), labels.end(), std::size_t{0});
    return from_labels(labels);
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t block_count() const { return block_count_; }
  std::size_t block_of(std::size_t point) const { return labels_.at(point); }
  std::span<const std::size_t> labels() const { return labels_; }

  std::vector<std::vector<std::size_t>> blocks() const {
    std::vector<std::vector<std::size_t>> out(block_count_);
    for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
    return out;
  }

  // True when every block of *this lies inside a block of `coarser`,
  // i.e. the sigma-algebra of `coarser` is contained in ours.
  bool refines(const Partition& coarser) const {
    require_same_space(*this, coarser);
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> image(block_count_, unset);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      auto& slot = image[labels_[i]];
      if (slot == unset) {
        slot = coarser.labels_[i];
      } else if (slot != coarser.labels_[i]) {
        return false;
      }
    }
    return true;
  }

  bool operator==(const Partition&) const = default;

  friend void require_same_space(const Partition& p, const Partition& q) {
    if (p.size() != q.size()) {
      throw std::invalid_argument("partitions live on different spaces (" +
                                  std::to_string(p.size()) + " vs " +
                                  std::to_string(q.size()) + " points)");
    }
  }

 private:
  std::vector<std::size_t> labels_;
  std::size_t block_count_ = 0;
};

// Coarsest partition refining both: the sigma-algebra generated by p and q.
inline Partition partition_join(const Partition& p, const Partition& q) {
  require_same_space(p, q);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  std::vector<std::size_t> labels(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto key = std::make_pair(p.block_of(i), q.block_of(i));
    labels[i] = ids.try_emplace(key, ids.size()).first->second;
  }
  return Partition::from_labels(labels);
}

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> labels() {
    std::vector<std::size_t> out(parent_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = find(i);
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

// Finest partition coarsened by both: the intersection of the two
// sigma-algebras. Blocks are the connected components of the graph joining
// points that share a block of p or a block of q.
inline Partition partition_meet(const Partition& p, const Partition& q) {
  require_same_space(p, q);
  detail::DisjointSets sets(p.size());
  for (const Partition* part : {&p, &q}) {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> first(part->block_count(), unset);
    for (std::size_t i = 0; i < part->size(); ++i) {
      auto& f = first[part->block_of(i)];
      if (f == unset) {
        f = i;
      } else {
        sets.unite(f, i);
      }
    }
  }
  return Partition::from_labels(sets.labels());
}

}  // namespace mdclt::exact
