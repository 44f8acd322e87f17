// Copyright 2026 The rosenblatt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROSENBLATT_RNG_HPP
#define ROSENBLATT_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

/**
 * \file
 * \brief Counter-based normal variates (Philox4x32-10 with Box-Muller).
 */

namespace rosenblatt {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32 block with 10 rounds.
inline PhiloxBlock philox4x32(PhiloxBlock ctr, PhiloxKey key) noexcept {
  constexpr std::uint64_t kM0 = 0xD2511F53u;
  constexpr std::uint64_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = kM0 * ctr[0];
    const std::uint64_t p1 = kM1 * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

/// Standard normal variates addressed by (seed, path, stream, index); any variate can be
/// regenerated in isolation and distinct addresses never share a Philox block.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t path, std::uint32_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        path_lo_{static_cast<std::uint32_t>(path)},
        path_hi_{static_cast<std::uint32_t>(path >> 32)},
        stream_{stream} {}

  /// Variate number k of the stream.
  [[nodiscard]] double operator()(std::uint32_t k) const noexcept {
    if ((k >> 1) != cached_block_) {
      cached_block_ = k >> 1;
      const PhiloxBlock out = philox4x32({cached_block_, stream_, path_lo_, path_hi_}, key_);
      const double u1 = to_unit(out[0], out[1]);
      const double u2 = to_unit(out[2], out[3]);
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double a = 2.0 * std::numbers::pi * u2;
      pair_ = {r * std::cos(a), r * std::sin(a)};
    }
    return pair_[k & 1u];
  }

 private:
  /// 53-bit uniform strictly inside (0, 1).
  static double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  PhiloxKey key_;
  std::uint32_t path_lo_;
  std::uint32_t path_hi_;
  std::uint32_t stream_;
  mutable std::uint32_t cached_block_ = 0xFFFFFFFFu;
  mutable std::array<double, 2> pair_{};
};

}  // namespace rosenblatt

#endif
