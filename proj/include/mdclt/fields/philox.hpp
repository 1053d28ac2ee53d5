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

// Philox4x32-10 counter-based generator (Salmon et al., Random123) and the
// driver-value conventions built on it. Every driver value is a pure
// function of (seed, stream, index, replicate), so any schedule of threads
// produces the same bits.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>

namespace mdclt::fields {

using Philox4x32 = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53U;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57U;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9U;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85U;

}  // namespace detail

constexpr Philox4x32 philox4x32(Philox4x32 ctr, PhiloxKey key) {
  std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
  std::uint32_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(detail::kPhiloxM0) * c0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(detail::kPhiloxM1) * c2;
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32U);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32U);
    c0 = hi1 ^ c1 ^ k0;
    c1 = static_cast<std::uint32_t>(p1);
    c2 = hi0 ^ c3 ^ k1;
    c3 = static_cast<std::uint32_t>(p0);
    k0 += detail::kPhiloxW0;
    k1 += detail::kPhiloxW1;
  }
  return {c0, c1, c2, c3};
}

// Uniform on (0, 1] with 53 random bits.
constexpr double uniform_open_closed(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32U | lo) >> 11U;
  return static_cast<double>(bits + 1) * 0x1.0p-53;
}

// Driver streams keyed by a 64-bit master seed. The counter is
// (block low, block high, stream, replicate).
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U)} {}

  constexpr std::uint64_t seed() const {
    return static_cast<std::uint64_t>(key_[1]) << 32U | key_[0];
  }

  constexpr Philox4x32 block(std::uint32_t stream, std::uint32_t replicate,
                             std::uint64_t block_index) const {
    return philox4x32({static_cast<std::uint32_t>(block_index),
                       static_cast<std::uint32_t>(block_index >> 32U), stream, replicate},
                      key_);
  }

  // Standard normal at position `index` of the stream. Positions 2k and
  // 2k+1 are the two outputs of one Box-Muller transform of block k.
  double gaussian(std::uint32_t stream, std::uint32_t replicate, std::uint64_t index) const {
    const auto pair = gaussian_pair(block(stream, replicate, index >> 1U));
    return pair[index & 1U];
  }

  // +1 or -1; bit (index mod 128) of block index / 128.
  int rademacher(std::uint32_t stream, std::uint32_t replicate, std::uint64_t index) const {
    const auto b = block(stream, replicate, index >> 7U);
    const unsigned bit = static_cast<unsigned>(index & 127U);
    return (b[bit >> 5U] >> (bit & 31U)) & 1U ? -1 : 1;
  }

  void fill_gaussian(std::uint32_t stream, std::uint32_t replicate, std::uint64_t first,
                     std::span<double> out) const {
    std::size_t k = 0;
    if (out.empty()) return;
    if (first & 1U) out[k++] = gaussian(stream, replicate, first);
    for (; k + 1 < out.size(); k += 2) {
      const auto pair = gaussian_pair(block(stream, replicate, (first + k) >> 1U));
      out[k] = pair[0];
      out[k + 1] = pair[1];
    }
    if (k < out.size()) out[k] = gaussian(stream, replicate, first + k);
  }

  void fill_rademacher(std::uint32_t stream, std::uint32_t replicate, std::uint64_t first,
                       std::span<double> out) const {
    std::size_t k = 0;
    while (k < out.size()) {
      const std::uint64_t index = first + k;
      const auto b = block(stream, replicate, index >> 7U);
      for (unsigned bit = static_cast<unsigned>(index & 127U); bit < 128 && k < out.size();
           ++bit, ++k) {
        out[k] = (b[bit >> 5U] >> (bit & 31U)) & 1U ? -1.0 : 1.0;
      }
    }
  }

 private:
  static std::array<double, 2> gaussian_pair(const Philox4x32& b) {
    const double u1 = uniform_open_closed(b[0], b[1]);
    const double u2 = uniform_open_closed(b[2], b[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  PhiloxKey key_;
};

}  // namespace mdclt::fields
