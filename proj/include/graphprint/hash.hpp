//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>

namespace graphprint {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

// 64-bit FNV-1a.
constexpr std::uint64_t hash_bytes(std::span<const std::uint8_t> data) {
  std::uint64_t h = kFnvOffsetBasis;
  for (std::uint8_t byte : data) {
    h ^= byte;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace graphprint
