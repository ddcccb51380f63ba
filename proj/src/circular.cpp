//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "graphprint/circular.hpp"

#include <algorithm>
#include <stdexcept>

#include "graphprint/hash.hpp"

namespace graphprint {

std::string CircularFingerprint::hex_digest() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 7) / 8 * 2);
  for (std::size_t byte = 0; byte * 8 < bits.size(); ++byte) {
    unsigned value = 0;
    for (std::size_t bit = 0; bit < 8 && byte * 8 + bit < bits.size(); ++bit)
      if (bits[byte * 8 + bit])
        value |= 1U << bit;
    out.push_back(kHex[value >> 4]);
    out.push_back(kHex[value & 0xF]);
  }
  return out;
}

std::vector<AtomIdentifier> initial_identifiers(const Molecule &mol) {
  std::vector<AtomIdentifier> ids;
  ids.reserve(static_cast<std::size_t>(mol.num_atoms()));
  for (int a = 0; a < mol.num_atoms(); ++a) {
    const AtomFeatureVector f = atom_features(mol, a);
    AtomIdentifier id(f.size());
    std::transform(f.begin(), f.end(), id.begin(),
                   [](double x) { return static_cast<std::uint8_t>(x != 0.0); });
    ids.push_back(std::move(id));
  }
  return ids;
}

std::vector<std::uint8_t> neighbor_sort_key(const Molecule &mol,
                                            std::span<const AtomIdentifier> layer,
                                            int atom, Neighbor neighbor) {
  if (atom < 0 || atom >= mol.num_atoms() || neighbor.atom < 0
      || neighbor.atom >= mol.num_atoms() || neighbor.bond < 0
      || neighbor.bond >= mol.num_bonds())
    throw std::out_of_range("neighbor_sort_key: index out of range");
  if (layer.size() != static_cast<std::size_t>(mol.num_atoms()))
    throw std::invalid_argument("neighbor_sort_key: one identifier per atom required");
  const Bond &bond = mol.bond(neighbor.bond);
  std::vector<std::uint8_t> key {static_cast<std::uint8_t>(bond.order),
                                 static_cast<std::uint8_t>(bond.conjugated),
                                 static_cast<std::uint8_t>(bond.in_ring)};
  const AtomIdentifier &id = layer[static_cast<std::size_t>(neighbor.atom)];
  key.insert(key.end(), id.begin(), id.end());
  return key;
}

CircularFingerprint circular_fingerprint(const Molecule &mol, int radius,
                                         int length) {
  if (radius < 1)
    throw std::invalid_argument("radius must be at least 1");
  if (length < 1)
    throw std::invalid_argument("fingerprint length must be at least 1");
  if (mol.empty())
    throw std::invalid_argument("cannot fingerprint an empty molecule");

  const auto n = static_cast<std::size_t>(mol.num_atoms());
  CircularFingerprint fp;
  fp.bits.assign(static_cast<std::size_t>(length), false);

  std::vector<AtomIdentifier> current = initial_identifiers(mol);
  std::vector<AtomIdentifier> next(n);
  std::vector<std::vector<std::uint8_t>> keys;
  std::vector<std::uint8_t> buffer;
  for (int layer = 0; layer < radius; ++layer) {
    for (std::size_t a = 0; a < n; ++a) {
      const int atom = static_cast<int>(a);
      keys.clear();
      for (const Neighbor &nb : mol.neighbors(atom))
        keys.push_back(neighbor_sort_key(mol, current, atom, nb));
      std::sort(keys.begin(), keys.end());

      buffer.assign(current[a].begin(), current[a].end());
      for (const auto &key : keys)
        buffer.insert(buffer.end(), key.begin(), key.end());
      const std::uint64_t h = hash_bytes(buffer);

      next[a].resize(8);
      for (int i = 0; i < 8; ++i)
        next[a][i] = static_cast<std::uint8_t>(h >> (8 * i));
      fp.bits[h % static_cast<std::uint64_t>(length)] = true;
    }
    std::swap(current, next);
  }

  for (std::size_t i = 0; i < fp.bits.size(); ++i)
    if (fp.bits[i])
      fp.set_indices.push_back(static_cast<int>(i));
  return fp;
}

}  // namespace graphprint
