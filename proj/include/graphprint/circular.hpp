//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphprint/molgraph.hpp"

namespace graphprint {

// Per-atom identifier bytes of one layer. Layer 0 is the 28 atom-feature
// entries as 0/1 bytes; later layers are the little-endian 8-byte hash.
using AtomIdentifier = std::vector<std::uint8_t>;

struct CircularFingerprint {
  std::vector<bool> bits;
  std::vector<int> set_indices;  // ascending

  std::size_t length() const { return bits.size(); }
  std::size_t popcount() const { return set_indices.size(); }
  // Bit i is bit (i % 8) of byte i / 8; bytes printed in order, lowercase.
  std::string hex_digest() const;

  bool operator==(const CircularFingerprint &) const = default;
};

std::vector<AtomIdentifier> initial_identifiers(const Molecule &mol);

// Sort key of one neighbour of `atom`:
//   [bond type code (single 0, double 1, triple 2, aromatic 3),
//    conjugated, in_ring] ++ identifier of the neighbour in `layer`.
// Keys compare lexicographically as byte strings.
std::vector<std::uint8_t> neighbor_sort_key(const Molecule &mol,
                                            std::span<const AtomIdentifier> layer,
                                            int atom, Neighbor neighbor);

// Hashed circular fingerprint of `radius` layers folded to `length` bits.
// Each layer rehashes every atom as FNV-1a(own identifier ++ sorted
// neighbour keys) from the previous layer's identifiers and sets bit
// (hash mod length).
CircularFingerprint circular_fingerprint(const Molecule &mol, int radius,
                                         int length);

}  // namespace graphprint
