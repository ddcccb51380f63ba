//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <queue>

#include <doctest.h>

#include "graphprint/molgraph.hpp"
#include "test_support.hpp"

using namespace graphprint;
using graphprint::testing::read_json;
using graphprint::testing::test_data;

namespace {

std::string order_name(BondOrder o) {
  switch (o) {
  case BondOrder::Single: return "single";
  case BondOrder::Double: return "double";
  case BondOrder::Triple: return "triple";
  case BondOrder::Aromatic: return "aromatic";
  }
  return "?";
}

const Bond *find_bond(const Molecule &m, int i, int j) {
  for (const Bond &b : m.bonds())
    if (b.begin == i && b.end == j)
      return &b;
  return nullptr;
}

// Returns a description of the first disagreement, or "" when the parse
// matches the toolkit record exactly.
std::string compare_with_golden(const nlohmann::json &record) {
  const std::string smiles = record["smiles"];
  Molecule m = parse_smiles(smiles, ParseOptions {.strip_stereo = true});
  const auto &atoms = record["atoms"];
  const auto &bonds = record["bonds"];
  if (m.num_atoms() != static_cast<int>(atoms.size()))
    return smiles + ": atom count";
  if (m.num_bonds() != static_cast<int>(bonds.size()))
    return smiles + ": bond count";
  for (int a = 0; a < m.num_atoms(); ++a) {
    const Atom &atom = m.atom(a);
    const auto &g = atoms[a];
    const std::string where = smiles + " atom " + std::to_string(a);
    if (atom.symbol != g["element"].get<std::string>())
      return where + ": element";
    if (atom.degree != g["degree"].get<int>())
      return where + ": degree";
    if (atom.aromatic != g["aromatic"].get<bool>())
      return where + ": aromatic";
    if (atom.formal_charge != g["charge"].get<int>())
      return where + ": charge";
    if (atom.implicit_h != g["h"].get<int>())
      return where + ": hydrogens " + std::to_string(atom.implicit_h) + " vs "
             + std::to_string(g["h"].get<int>());
  }
  for (const auto &g : bonds) {
    const Bond *b = find_bond(m, g["i"], g["j"]);
    const std::string where = smiles + " bond " + g["i"].dump() + "-" + g["j"].dump();
    if (!b)
      return where + ": missing";
    if (order_name(b->order) != g["order"].get<std::string>())
      return where + ": order";
    if (b->conjugated != g["conjugated"].get<bool>())
      return where + ": conjugated";
    if (b->in_ring != g["in_ring"].get<bool>())
      return where + ": in_ring";
  }
  return "";
}

bool connected_without(const Molecule &m, int skip_bond, int from, int to) {
  std::vector<bool> seen(static_cast<std::size_t>(m.num_atoms()), false);
  std::queue<int> queue;
  queue.push(from);
  seen[from] = true;
  while (!queue.empty()) {
    const int a = queue.front();
    queue.pop();
    if (a == to)
      return true;
    for (const Neighbor &nb : m.neighbors(a)) {
      if (nb.bond == skip_bond || seen[nb.atom])
        continue;
      seen[nb.atom] = true;
      queue.push(nb.atom);
    }
  }
  return false;
}

std::vector<AtomFeatureVector> sorted_atom_features(const Molecule &m) {
  std::vector<AtomFeatureVector> out;
  for (int a = 0; a < m.num_atoms(); ++a)
    out.push_back(atom_features(m, a));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("methane") {
  Molecule m = parse_smiles("C");
  REQUIRE(m.num_atoms() == 1);
  CHECK(m.num_bonds() == 0);
  CHECK(m.atom(0).symbol == "C");
  CHECK(m.atom(0).degree == 0);
  CHECK(m.atom(0).implicit_h == 4);
  CHECK_FALSE(m.atom(0).aromatic);
}

TEST_CASE("benzene") {
  Molecule m = parse_smiles("c1ccccc1");
  REQUIRE(m.num_atoms() == 6);
  REQUIRE(m.num_bonds() == 6);
  for (const Atom &a : m.atoms()) {
    CHECK(a.aromatic);
    CHECK(a.degree == 2);
    CHECK(a.implicit_h == 1);
  }
  for (const Bond &b : m.bonds()) {
    CHECK(b.order == BondOrder::Aromatic);
    CHECK(b.in_ring);
    CHECK(b.conjugated);
  }
}

TEST_CASE("acetic acid") {
  Molecule m = parse_smiles("CC(=O)O");
  REQUIRE(m.num_atoms() == 4);
  CHECK(m.atom(1).degree == 3);
  CHECK(m.atom(1).implicit_h == 0);
  const Bond *carbonyl = find_bond(m, 1, 2);
  REQUIRE(carbonyl);
  CHECK(carbonyl->order == BondOrder::Double);
  for (const Bond &b : m.bonds())
    CHECK_FALSE(b.in_ring);
}

TEST_CASE("bracket atoms, charges and ring closures") {
  Molecule nitro = parse_smiles("O=[N+]([O-])c1ccccc1");
  CHECK(nitro.atom(1).formal_charge == 1);
  CHECK(nitro.atom(2).formal_charge == -1);
  CHECK(nitro.atom(1).implicit_h == 0);

  Molecule pyrrole = parse_smiles("c1cc[nH]c1");
  CHECK(pyrrole.atom(3).explicit_h == 1);
  CHECK(pyrrole.atom(3).implicit_h == 1);

  CHECK(parse_smiles("C%10CCCCC%10") == parse_smiles("C1CCCCC1"));
  CHECK(find_bond(parse_smiles("C=1CC1"), 0, 2)->order == BondOrder::Double);
  CHECK(parse_smiles("[Fe++]").atom(0).formal_charge == 2);
  CHECK(parse_smiles("[O-2]").atom(0).formal_charge == -2);

  Molecule salt = parse_smiles("[Na+].[Cl-]");
  CHECK(salt.num_atoms() == 2);
  CHECK(salt.num_bonds() == 0);
}

TEST_CASE("parse errors carry offsets") {
  auto offset_of = [](const std::string &s) -> std::size_t {
    try {
      parse_smiles(s);
    } catch (const ParseError &e) {
      return e.offset();
    }
    FAIL("expected ParseError for " << s);
    return 0;
  };
  CHECK(offset_of("CXC") == 1);              // unknown symbol
  CHECK(offset_of("CC(C") == 2);             // unbalanced parenthesis
  CHECK(offset_of("CC)C") == 2);
  CHECK(offset_of("C[NH4+") == 1);           // unbalanced bracket
  CHECK(offset_of("C1CC") == 1);             // unmatched ring closure
  CHECK(offset_of("CC(C)(C)(C)(C)(C)C") == 1);  // degree 6
  CHECK(offset_of("CC(=C)(=C)C") == 1);      // carbon valence 6
  CHECK(offset_of("N[C@H](C)O") == 3);       // chirality
  CHECK(offset_of("F/C=C/F") == 1);          // bond direction
  CHECK(offset_of("") == 0);
  CHECK(offset_of("C==C") == 2);
  CHECK(offset_of("C11") == 2);
  CHECK(offset_of("CC.CC=") == 5);
  CHECK_THROWS_AS(parse_smiles("[2H]C"), ParseError);
  CHECK_THROWS_AS(parse_smiles("[H]C"), ParseError);
  CHECK_THROWS_AS(parse_smiles("C:C"), ParseError);

  try {
    parse_smiles("F/C=C/F");
  } catch (const ParseError &e) {
    CHECK(e.reason().find("stereo unsupported") != std::string::npos);
  }
}

TEST_CASE("strip_stereo ignores stereo tokens") {
  const ParseOptions strip {.strip_stereo = true};
  CHECK(parse_smiles("F/C=C/F", strip) == parse_smiles("FC=CF"));
  CHECK(parse_smiles("N[C@@H](C)O", strip) == parse_smiles("N[CH](C)O"));
  CHECK(parse_smiles("N[C@H](C)O", strip).atom(1).implicit_h == 1);
}

TEST_CASE("atom features") {
  Molecule methane = parse_smiles("C");
  AtomFeatureVector f = atom_features(methane, 0);
  AtomFeatureVector expected {};
  expected[0] = 1;        // C
  expected[10 + 0] = 1;   // degree 0
  expected[16 + 4] = 1;   // 4 hydrogens
  expected[21 + 4] = 1;   // implicit valence 4
  CHECK(f == expected);

  AtomFeatureVector benzene_c = atom_features(parse_smiles("c1ccccc1"), 0);
  CHECK(benzene_c[0] == 1);
  CHECK(benzene_c[10 + 2] == 1);
  CHECK(benzene_c[16 + 1] == 1);
  CHECK(benzene_c[27] == 1);

  AtomFeatureVector si = atom_features(parse_smiles("[SiH4]"), 0);
  CHECK(si[9] == 1);
  CHECK(std::count(si.begin(), si.begin() + 10, 1.0) == 1);

  CHECK_THROWS_AS(atom_features(methane, 1), std::out_of_range);
  CHECK_THROWS_AS(atom_features(methane, -1), std::out_of_range);
}

TEST_CASE("feature one-hot blocks each sum to one") {
  for (const Molecule &m : graphprint::testing::fixture_molecules()) {
    for (int a = 0; a < m.num_atoms(); ++a) {
      const AtomFeatureVector f = atom_features(m, a);
      for (const FeatureBlock &block : atom_feature_layout()) {
        if (block.width == 1)
          continue;
        double sum = 0;
        for (std::size_t i = 0; i < block.width; ++i)
          sum += f[block.offset + i];
        CHECK(sum == 1.0);
      }
    }
    for (int b = 0; b < m.num_bonds(); ++b) {
      const BondFeatureVector f = bond_features(m, b);
      CHECK(f[0] + f[1] + f[2] + f[3] == 1.0);
    }
  }
}

TEST_CASE("hydrogen bucket clamps") {
  // [CH5+] is chemically odd but exercises the open top bucket.
  Molecule m = parse_smiles("[CH5+]");
  AtomFeatureVector f = atom_features(m, 0);
  CHECK(f[16 + 4] == 1);
  CHECK(f[21 + 5] == 1);
}

TEST_CASE("bond features") {
  using V = BondFeatureVector;
  CHECK(bond_features(parse_smiles("CC"), 0) == V {1, 0, 0, 0, 0, 0});
  CHECK(bond_features(parse_smiles("c1ccccc1"), 0) == V {0, 0, 0, 1, 1, 1});
  Molecule butadiene = parse_smiles("C=CC=C");
  const V middle = bond_features(butadiene, 1);
  CHECK(middle[0] == 1);
  CHECK(middle[4] == 1);
  CHECK(middle[5] == 0);
  CHECK_THROWS_AS(bond_features(butadiene, 3), std::out_of_range);
}

TEST_CASE("permute_atoms") {
  Molecule co = parse_smiles("CO");
  const std::vector<int> identity {0, 1};
  CHECK(permute_atoms(co, identity) == co);

  const std::vector<int> swap {1, 0};
  Molecule oc = permute_atoms(co, swap);
  CHECK(oc.atom(0).symbol == "O");
  CHECK(oc.atom(1).symbol == "C");
  REQUIRE(oc.num_bonds() == 1);
  CHECK(oc.bond(0).begin == 0);
  CHECK(oc.bond(0).end == 1);
  CHECK(oc.bond(0).order == BondOrder::Single);

  Molecule benzene = parse_smiles("c1ccccc1");
  const std::vector<int> rotate {1, 2, 3, 4, 5, 0};
  Molecule rotated = permute_atoms(benzene, rotate);
  CHECK(sorted_atom_features(rotated) == sorted_atom_features(benzene));

  const std::vector<int> bad {0, 0};
  CHECK_THROWS_AS(permute_atoms(co, bad), std::invalid_argument);
  const std::vector<int> short_perm {0};
  CHECK_THROWS_AS(permute_atoms(co, short_perm), std::invalid_argument);
}

TEST_CASE("permutation preserves the atom feature multiset") {
  std::mt19937_64 rng(7);
  for (const Molecule &m : graphprint::testing::fixture_molecules()) {
    for (int trial = 0; trial < 5; ++trial) {
      auto perm = graphprint::testing::random_permutation(m.num_atoms(), rng);
      Molecule p = permute_atoms(m, perm);
      CHECK(sorted_atom_features(p) == sorted_atom_features(m));
      for (int b = 0; b < m.num_bonds(); ++b)
        CHECK(bond_features(p, b) == bond_features(m, b));
    }
  }
}

TEST_CASE("adjacency symmetry and ring membership against brute force") {
  for (const Molecule &m : graphprint::testing::fixture_molecules()) {
    for (int a = 0; a < m.num_atoms(); ++a) {
      CHECK(m.atom(a).degree == static_cast<int>(m.neighbors(a).size()));
      for (const Neighbor &nb : m.neighbors(a)) {
        const auto back = m.neighbors(nb.atom);
        CHECK(std::find(back.begin(), back.end(), Neighbor {a, nb.bond})
              != back.end());
      }
    }
    for (int b = 0; b < m.num_bonds(); ++b) {
      const Bond &bond = m.bond(b);
      CHECK(bond.in_ring == connected_without(m, b, bond.begin, bond.end));
    }
  }
}

TEST_CASE("features are pure") {
  Molecule m = parse_smiles("Cn1c(=O)c2c(ncn2C)n(C)c1=O");
  for (int a = 0; a < m.num_atoms(); ++a)
    CHECK(atom_features(m, a) == atom_features(m, a));
  CHECK(parse_smiles("Cn1c(=O)c2c(ncn2C)n(C)c1=O") == m);
}

TEST_CASE("fixture corpus matches toolkit golden file") {
  const auto golden = read_json(test_data("parser_golden.json"));
  int agree = 0;
  for (const auto &record : golden["molecules"]) {
    const std::string diff = compare_with_golden(record);
    CHECK_MESSAGE(diff.empty(), diff);
    agree += diff.empty();
  }
  CHECK(agree == 50);
}

TEST_CASE("solubility corpus matches toolkit golden file") {
  const auto golden = read_json(test_data("delaney_golden.json"));
  int mismatches = 0;
  for (const auto &record : golden["molecules"]) {
    const std::string diff = compare_with_golden(record);
    if (!diff.empty() && ++mismatches <= 20)
      MESSAGE(diff);
  }
  CHECK(mismatches == 0);
}
