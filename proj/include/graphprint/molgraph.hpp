//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace graphprint {

// Element buckets of the atom one-hot block, in layout order.
enum class Element : std::uint8_t { C, N, O, S, F, P, Cl, Br, I, Other };

inline constexpr std::size_t kNumElementBuckets = 10;
inline constexpr int kMaxDegree = 5;

enum class BondOrder : std::uint8_t { Single, Double, Triple, Aromatic };

struct Atom {
  std::string symbol;  // element symbol as written, capitalised ("C", "Cl", "Si")
  Element element = Element::Other;
  int atomic_number = 0;
  bool aromatic = false;
  bool bracket = false;
  int formal_charge = 0;
  int explicit_h = 0;
  // Attached hydrogens. For bracket atoms this equals explicit_h.
  int implicit_h = 0;
  int degree = 0;
  int implicit_valence = 0;

  bool operator==(const Atom &) const = default;
};

struct Bond {
  int begin = 0;  // begin < end
  int end = 0;
  BondOrder order = BondOrder::Single;
  bool conjugated = false;
  bool in_ring = false;

  int other(int atom) const { return atom == begin ? end : begin; }

  bool operator==(const Bond &) const = default;
};

struct Neighbor {
  int atom = 0;
  int bond = 0;

  bool operator==(const Neighbor &) const = default;
};

// Hydrogen-suppressed molecular graph. Immutable once built.
class Molecule {
public:
  Molecule() = default;

  // Builds adjacency and checks structural invariants. Derived atom/bond
  // fields are taken as given.
  Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds);

  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  const Atom &atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond &bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }
  std::span<const Neighbor> neighbors(int i) const {
    return adjacency_[static_cast<std::size_t>(i)];
  }

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  bool empty() const { return atoms_.empty(); }

  bool operator==(const Molecule &other) const {
    return atoms_ == other.atoms_ && bonds_ == other.bonds_;
  }

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t offset, const std::string &reason);

  std::size_t offset() const { return offset_; }
  const std::string &reason() const { return reason_; }

private:
  std::size_t offset_;
  std::string reason_;
};

struct ParseOptions {
  // Drop '/', '\\' and '@' tokens instead of rejecting them.
  bool strip_stereo = false;
};

Molecule parse_smiles(std::string_view text, const ParseOptions &options = {});

// ---- feature vectors ------------------------------------------------------
//
// Atom layout (28 entries, all 0/1):
//   [0, 10)   element one-hot  C N O S F P Cl Br I other
//   [10, 16)  heavy-atom degree 0..5
//   [16, 21)  attached hydrogens 0..4 (>= 4 in the last bucket)
//   [21, 27)  implicit valence 0..5
//   [27]      aromatic
//
// Bond layout (6 entries): single double triple aromatic conjugated in_ring

inline constexpr std::size_t kAtomFeatureDim = 28;
inline constexpr std::size_t kBondFeatureDim = 6;

using AtomFeatureVector = std::array<double, kAtomFeatureDim>;
using BondFeatureVector = std::array<double, kBondFeatureDim>;

struct FeatureBlock {
  std::string name;
  std::size_t offset;
  std::size_t width;
  std::vector<std::string> labels;
};

std::vector<FeatureBlock> atom_feature_layout();
std::vector<FeatureBlock> bond_feature_layout();

AtomFeatureVector atom_features(const Molecule &mol, int atom_index);
BondFeatureVector bond_features(const Molecule &mol, int bond_index);

// Relabels atom i as perm[i].
Molecule permute_atoms(const Molecule &mol, std::span<const int> perm);

std::string_view element_bucket_name(Element e);

}  // namespace graphprint
