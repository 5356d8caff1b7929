// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "codecarta/token.hpp"

namespace codecarta::detail {

// SplitMix64 finaliser; used wherever a value must be derived from a seed
// without carrying generator state around.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_token(std::uint64_t seed, const Token& token) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint32_t part : token.path()) h = mix64(h ^ part);
  return mix64(h ^ token.depth());
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace codecarta::detail
