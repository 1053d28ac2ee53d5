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

#include "mdclt/exact/action.hpp"
#include "mdclt/exact/conditional.hpp"
#include "mdclt/exact/finite_space.hpp"
#include "mdclt/exact/partition.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mdclt::exact {

using GridIndex = std::vector<std::int64_t>;

inline std::string format_index(const GridIndex& idx) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k];
  os << ')';
  return os.str();
}

// A rectangle of Z^d indices with one sigma-algebra (partition) per index.
// Cells are stored row-major, last axis fastest. Construction rejects grids
// that are not monotone: the cell at a must refine the cell at b whenever
// b <= a coordinatewise.
class FiltrationGrid {
 public:
  FiltrationGrid(GridIndex origin, std::vector<std::size_t> extent, std::vector<Partition> cells)
      : origin_(std::move(origin)), extent_(std::move(extent)), cells_(std::move(cells)) {
    if (origin_.empty() || origin_.size() != extent_.size()) {
      throw std::invalid_argument("FiltrationGrid: origin/extent dimension mismatch");
    }
    std::size_t count = 1;
    for (auto e : extent_) {
      if (e == 0) throw std::invalid_argument("FiltrationGrid: empty index range");
      count *= e;
    }
    if (cells_.size() != count) {
      throw std::invalid_argument("FiltrationGrid: expected " + std::to_string(count) +
                                  " cells, got " + std::to_string(cells_.size()));
    }
    for (const auto& c : cells_) {
      if (c.size() != cells_.front().size()) {
        throw std::invalid_argument("FiltrationGrid: cells live on different spaces");
      }
    }
    for (std::size_t flat = 0; flat < cells_.size(); ++flat) {
      const auto idx = index(flat);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        auto up = idx;
        ++up[k];
        if (!contains(up)) continue;
        if (!cell(up).refines(cell(idx))) {
          throw std::invalid_argument("FiltrationGrid: not monotone between " +
                                      format_index(idx) + " and " + format_index(up));
        }
      }
    }
  }

  std::size_t dimension() const { return origin_.size(); }
  std::size_t cell_count() const { return cells_.size(); }
  std::size_t space_size() const { return cells_.front().size(); }
  const GridIndex& origin() const { return origin_; }
  const std::vector<std::size_t>& extent() const { return extent_; }

  bool contains(const GridIndex& idx) const {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] < origin_[k] || idx[k] >= origin_[k] + static_cast<std::int64_t>(extent_[k])) {
        return false;
      }
    }
    return idx.size() == origin_.size();
  }

  GridIndex index(std::size_t flat) const {
    GridIndex idx(origin_.size());
    for (std::size_t k = origin_.size(); k-- > 0;) {
      idx[k] = origin_[k] + static_cast<std::int64_t>(flat % extent_[k]);
      flat /= extent_[k];
    }
    return idx;
  }

  std::size_t flat(const GridIndex& idx) const {
    if (!contains(idx)) throw std::out_of_range("FiltrationGrid: index " + format_index(idx));
    std::size_t f = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      f = f * extent_[k] + static_cast<std::size_t>(idx[k] - origin_[k]);
    }
    return f;
  }

  const Partition& cell(const GridIndex& idx) const { return cells_[flat(idx)]; }
  const Partition& cell(std::size_t flat_index) const { return cells_.at(flat_index); }

 private:
  GridIndex origin_;
  std::vector<std::size_t> extent_;
  std::vector<Partition> cells_;
};

struct CommutingWitness {
  std::size_t point = 0;  // f is the indicator of this point
  GridIndex first;
  GridIndex second;

  std::string describe() const {
    return "f = 1_{" + std::to_string(point) + "}, E[E[f|F" + format_index(first) + "]|F" +
           format_index(second) + "] != E[f|F_min]";
  }
};

struct CommutingReport {
  bool holds = true;
  std::optional<CommutingWitness> witness;
};

// Checks E[E[f|F_a]|F_b] = E[f|F_{min(a,b)}] for every pair of indices in
// the grid and every point indicator f (enough by linearity).
inline CommutingReport check_completely_commuting(const FiniteSpace& space,
                                                  const FiltrationGrid& grid) {
  if (grid.space_size() != space.size()) {
    throw std::invalid_argument("check_completely_commuting: grid and space differ in size");
  }
  const auto n = space.size();
  const auto cells = grid.cell_count();
  // first[a][x] = E[1_x | F_a]
  std::vector<std::vector<RationalVector>> first(cells);
  for (std::size_t a = 0; a < cells; ++a) {
    first[a].reserve(n);
    for (std::size_t x = 0; x < n; ++x) {
      first[a].push_back(cond_exp(space, point_indicator(n, x), grid.cell(a)));
    }
  }
  for (std::size_t a = 0; a < cells; ++a) {
    const auto ia = grid.index(a);
    for (std::size_t b = 0; b < cells; ++b) {
      const auto ib = grid.index(b);
      GridIndex lo(ia.size());
      for (std::size_t k = 0; k < lo.size(); ++k) lo[k] = std::min(ia[k], ib[k]);
      const auto m = grid.flat(lo);
      for (std::size_t x = 0; x < n; ++x) {
        if (cond_exp(space, first[a][x], grid.cell(b)) != first[m][x]) {
          return {false, CommutingWitness{x, ia, ib}};
        }
      }
    }
  }
  return {};
}

// Property (i): F_a is the pullback of F_origin along T_{a - origin}.
inline std::optional<GridIndex> find_stationarity_violation(const FiltrationGrid& grid,
                                                            const FiniteAction& action) {
  if (action.dimension() != grid.dimension() || action.size() != grid.space_size()) {
    throw std::invalid_argument("stationarity check: action does not match grid");
  }
  const auto& base = grid.cell(grid.origin());
  for (std::size_t f = 0; f < grid.cell_count(); ++f) {
    auto idx = grid.index(f);
    GridIndex shift(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) shift[k] = idx[k] - grid.origin()[k];
    if (pullback(base, action.element(shift)) != grid.cell(f)) return idx;
  }
  return std::nullopt;
}

}  // namespace mdclt::exact
