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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdclt::fields {

// The summation box {1..l} x {1..m} [x {1..n}]. Cells are addressed
// row-major with the last axis fastest.
class Window {
 public:
  Window() = default;

  explicit Window(std::vector<std::uint64_t> lengths) : lengths_(std::move(lengths)) {
    if (lengths_.size() != 2 && lengths_.size() != 3) {
      throw std::invalid_argument("Window: dimension must be 2 or 3, got " +
                                  std::to_string(lengths_.size()));
    }
    cells_ = 1;
    for (auto len : lengths_) {
      if (len == 0) throw std::invalid_argument("Window: side lengths must be >= 1");
      if (len > std::numeric_limits<std::uint32_t>::max() ||
          cells_ > std::numeric_limits<std::uint64_t>::max() / len) {
        throw std::overflow_error("Window: cell count overflows");
      }
      cells_ *= len;
    }
  }

  static Window square(std::uint64_t side) { return Window({side, side}); }
  static Window cube(std::uint64_t side) { return Window({side, side, side}); }

  std::size_t dimension() const { return lengths_.size(); }
  std::uint64_t length(std::size_t axis) const { return lengths_.at(axis); }
  const std::vector<std::uint64_t>& lengths() const { return lengths_; }
  std::uint64_t cell_count() const { return cells_; }

  // Number of rows: cells / last side.
  std::uint64_t row_count() const { return cells_ / lengths_.back(); }
  std::uint64_t row_length() const { return lengths_.back(); }

  // Zero-based coordinates of a flat cell index.
  std::vector<std::uint64_t> coords(std::uint64_t flat) const {
    std::vector<std::uint64_t> c(lengths_.size());
    for (std::size_t k = lengths_.size(); k-- > 0;) {
      c[k] = flat % lengths_[k];
      flat /= lengths_[k];
    }
    return c;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t k = 0; k < lengths_.size(); ++k) {
      s += (k ? "x" : "") + std::to_string(lengths_[k]);
    }
    return s;
  }

  bool operator==(const Window&) const = default;

 private:
  std::vector<std::uint64_t> lengths_;
  std::uint64_t cells_ = 0;
};

}  // namespace mdclt::fields
