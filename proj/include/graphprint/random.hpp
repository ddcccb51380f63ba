//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace graphprint {

// Seeded generator used everywhere randomness is needed: std::mt19937_64
// (bit-exact by the standard) with hand-written transforms, so draws do not
// depend on the standard library's distribution implementations.
//
//   uniform()  : top 53 bits of one engine output, in [0, 1)
//   normal()   : Box-Muller on two uniforms; both outputs are used in order
//   index(n)   : rejection sampling on engine outputs, unbiased in [0, n)
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) { }

  std::uint64_t next() { return engine_(); }

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal();

  std::uint64_t index(std::uint64_t n);

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace graphprint
