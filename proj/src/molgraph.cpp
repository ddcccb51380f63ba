//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "graphprint/molgraph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <utility>

namespace graphprint {

namespace {

constexpr std::array<std::string_view, 119> kSymbols = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
    "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
    "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
    "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
    "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
    "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
    "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
    "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
    "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

int atomic_number_of(std::string_view symbol) {
  for (std::size_t z = 1; z < kSymbols.size(); ++z)
    if (kSymbols[z] == symbol)
      return static_cast<int>(z);
  return 0;
}

// Valence-shell electrons and default valence for main-group elements.
// Elements without an entry are treated as unable to take part in
// conjugation.
struct ValenceData {
  int outer_electrons;
  int default_valence;
};

std::optional<ValenceData> valence_data(int z) {
  switch (z) {
  case 1: return ValenceData {1, 1};
  case 3: case 11: case 19: case 37: case 55: return ValenceData {1, 1};
  case 4: case 12: case 20: case 38: case 56: return ValenceData {2, 2};
  case 5: case 13: return ValenceData {3, 3};
  case 6: case 14: case 32: return ValenceData {4, 4};
  case 7: case 15: case 33: return ValenceData {5, 3};
  case 8: case 16: case 34: case 52: return ValenceData {6, 2};
  case 9: case 17: case 35: case 53: return ValenceData {7, 1};
  default: return std::nullopt;
  }
}

// Allowed valences of the organic subset, ascending.
std::vector<int> allowed_valences(int z) {
  switch (z) {
  case 5: return {3};
  case 6: return {4};
  case 7: return {3};
  case 8: return {2};
  case 9: case 17: case 35: return {1};
  case 15: return {3, 5, 7};
  case 16: return {2, 4, 6};
  case 53: return {1, 3, 5};
  default: return {};
  }
}

Element bucket_of(std::string_view symbol) {
  static const std::map<std::string_view, Element> kBuckets = {
      {"C", Element::C},   {"N", Element::N},   {"O", Element::O},
      {"S", Element::S},   {"F", Element::F},   {"P", Element::P},
      {"Cl", Element::Cl}, {"Br", Element::Br}, {"I", Element::I},
  };
  auto it = kBuckets.find(symbol);
  return it == kBuckets.end() ? Element::Other : it->second;
}

double valence_contribution(BondOrder order) {
  switch (order) {
  case BondOrder::Single: return 1.0;
  case BondOrder::Double: return 2.0;
  case BondOrder::Triple: return 3.0;
  case BondOrder::Aromatic: return 1.5;
  }
  return 1.0;
}

enum class BondSymbol { None, Single, Double, Triple, Aromatic };

struct PendingBond {
  BondSymbol symbol = BondSymbol::None;
  std::size_t offset = 0;
};

struct RingOpening {
  int atom;
  PendingBond bond;
  std::size_t offset;
};

struct RawBond {
  int a;
  int b;
  BondSymbol symbol;
  std::size_t offset;
};

class SmilesParser {
public:
  SmilesParser(std::string_view text, const ParseOptions &options)
      : text_(text), options_(options) { }

  Molecule parse() {
    if (text_.empty())
      throw ParseError(0, "empty SMILES");
    for (std::size_t i = 0; i < text_.size(); ++i)
      if (static_cast<unsigned char>(text_[i]) > 127)
        throw ParseError(i, "non-ASCII character");

    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '[' || std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
        const int idx = c == '[' ? parse_bracket_atom() : parse_organic_atom();
        if (prev_ >= 0)
          add_bond(prev_, idx, take_pending());
        else if (pending_)
          throw ParseError(pending_->offset, "bond without a preceding atom");
        prev_ = idx;
      } else if (c == '(') {
        if (prev_ < 0)
          throw ParseError(pos_, "branch without a preceding atom");
        if (pending_)
          throw ParseError(pending_->offset, "dangling bond before branch");
        branches_.emplace_back(prev_, pos_);
        ++pos_;
      } else if (c == ')') {
        if (branches_.empty())
          throw ParseError(pos_, "unbalanced parenthesis");
        if (pending_)
          throw ParseError(pending_->offset, "dangling bond at end of branch");
        prev_ = branches_.back().first;
        branches_.pop_back();
        ++pos_;
      } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/'
                 || c == '\\') {
        parse_bond_symbol();
      } else if (c == '.') {
        if (pending_)
          throw ParseError(pending_->offset, "dangling bond before '.'");
        prev_ = -1;
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        parse_ring_closure();
      } else if (c == '$') {
        throw ParseError(pos_, "quadruple bonds unsupported");
      } else {
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
      }
    }

    if (!branches_.empty())
      throw ParseError(branches_.back().second, "unbalanced parenthesis");
    if (!rings_.empty())
      throw ParseError(rings_.begin()->second.offset,
                       "unmatched ring-closure digit "
                           + std::to_string(rings_.begin()->first));
    if (pending_)
      throw ParseError(pending_->offset, "dangling bond at end of input");
    if (atoms_.empty())
      throw ParseError(0, "no atoms");

    return finish();
  }

private:
  std::optional<PendingBond> take_pending() {
    auto p = pending_;
    pending_.reset();
    return p;
  }

  [[noreturn]] void stereo_error(std::size_t at) const {
    throw ParseError(at, "stereo unsupported (use --strip-stereo to ignore)");
  }

  void parse_bond_symbol() {
    const char c = text_[pos_];
    if (pending_)
      throw ParseError(pos_, "two consecutive bond symbols");
    PendingBond b {BondSymbol::None, pos_};
    switch (c) {
    case '-': b.symbol = BondSymbol::Single; break;
    case '=': b.symbol = BondSymbol::Double; break;
    case '#': b.symbol = BondSymbol::Triple; break;
    case ':': b.symbol = BondSymbol::Aromatic; break;
    default:
      if (!options_.strip_stereo)
        stereo_error(pos_);
      b.symbol = BondSymbol::Single;
    }
    pending_ = b;
    ++pos_;
  }

  void parse_ring_closure() {
    const std::size_t start = pos_;
    int number = 0;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size()
          || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))
          || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])))
        throw ParseError(pos_, "'%' must be followed by two digits");
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = text_[pos_] - '0';
      ++pos_;
    }
    if (prev_ < 0)
      throw ParseError(start, "ring closure without a preceding atom");

    auto it = rings_.find(number);
    if (it == rings_.end()) {
      rings_.emplace(number,
                     RingOpening {prev_, pending_.value_or(PendingBond {}),
                                  start});
      pending_.reset();
      return;
    }
    RingOpening open = it->second;
    rings_.erase(it);
    PendingBond here = pending_.value_or(PendingBond {BondSymbol::None, start});
    pending_.reset();
    PendingBond chosen = here;
    if (open.bond.symbol != BondSymbol::None) {
      if (here.symbol != BondSymbol::None && here.symbol != open.bond.symbol)
        throw ParseError(start, "conflicting ring-closure bond symbols");
      chosen = open.bond;
    }
    chosen.offset = start;
    add_bond(open.atom, prev_, chosen);
  }

  void add_bond(int a, int b, std::optional<PendingBond> bond) {
    const std::size_t offset = bond ? bond->offset : pos_;
    if (a == b)
      throw ParseError(offset, "atom bonded to itself");
    raw_bonds_.push_back(
        RawBond {a, b, bond ? bond->symbol : BondSymbol::None, offset});
  }

  int push_atom(Atom atom, std::size_t offset) {
    atoms_.push_back(std::move(atom));
    atom_offsets_.push_back(offset);
    return static_cast<int>(atoms_.size()) - 1;
  }

  int parse_organic_atom() {
    const std::size_t start = pos_;
    const char c = text_[pos_];
    std::string symbol;
    bool aromatic = false;
    auto next_is = [&](char n) {
      return pos_ + 1 < text_.size() && text_[pos_ + 1] == n;
    };
    switch (c) {
    case 'C':
      symbol = next_is('l') ? "Cl" : "C";
      break;
    case 'B':
      symbol = next_is('r') ? "Br" : "B";
      break;
    case 'N': case 'O': case 'P': case 'S': case 'F': case 'I':
      symbol = std::string(1, c);
      break;
    case 'b': case 'c': case 'n': case 'o': case 'p': case 's':
      symbol = std::string(1, static_cast<char>(std::toupper(c)));
      aromatic = true;
      break;
    default:
      throw ParseError(start, std::string("unknown atom symbol '") + c + "'");
    }
    pos_ += symbol.size();

    Atom atom;
    atom.symbol = symbol;
    atom.atomic_number = atomic_number_of(symbol);
    atom.element = bucket_of(symbol);
    atom.aromatic = aromatic;
    return push_atom(std::move(atom), start);
  }

  int parse_bracket_atom() {
    const std::size_t start = pos_;
    ++pos_;  // '['
    auto at_end = [&] { return pos_ >= text_.size(); };
    auto peek = [&]() -> char { return at_end() ? '\0' : text_[pos_]; };

    if (std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError(pos_, "isotope labels unsupported");

    Atom atom;
    atom.bracket = true;
    if (at_end())
      throw ParseError(start, "unterminated bracket atom");
    const char first = peek();
    if (std::islower(static_cast<unsigned char>(first))) {
      static constexpr std::array<std::string_view, 3> kTwoLetter = {"se", "as",
                                                                      "te"};
      std::string_view rest = text_.substr(pos_);
      std::string lower;
      for (auto two : kTwoLetter)
        if (rest.starts_with(two))
          lower = std::string(two);
      if (lower.empty()) {
        if (std::string_view("bcnops").find(first) == std::string_view::npos)
          throw ParseError(pos_, std::string("unknown atom symbol '") + first
                                     + "'");
        lower = std::string(1, first);
      }
      pos_ += lower.size();
      atom.symbol = lower;
      atom.symbol[0] = static_cast<char>(std::toupper(atom.symbol[0]));
      atom.aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(first))) {
      std::string two;
      if (pos_ + 1 < text_.size()
          && std::islower(static_cast<unsigned char>(text_[pos_ + 1])))
        two = std::string(text_.substr(pos_, 2));
      if (!two.empty() && atomic_number_of(two) != 0) {
        atom.symbol = two;
      } else {
        atom.symbol = std::string(1, first);
      }
      pos_ += atom.symbol.size();
    } else {
      throw ParseError(pos_, "expected element symbol in bracket atom");
    }
    atom.atomic_number = atomic_number_of(atom.symbol);
    if (atom.atomic_number == 0)
      throw ParseError(start + 1,
                       "unknown atom symbol '" + atom.symbol + "'");
    if (atom.atomic_number == 1)
      throw ParseError(start + 1, "explicit hydrogen atoms unsupported");
    atom.element = bucket_of(atom.symbol);

    if (peek() == '@') {
      if (!options_.strip_stereo)
        stereo_error(pos_);
      while (peek() == '@')
        ++pos_;
      // Extended chirality classes (@TH1, @SP2, ...).
      while (std::isupper(static_cast<unsigned char>(peek())) && peek() != 'H')
        ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek())))
        ++pos_;
    }

    if (peek() == 'H') {
      ++pos_;
      atom.explicit_h = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        atom.explicit_h = peek() - '0';
        ++pos_;
      }
    }

    if (peek() == '+' || peek() == '-') {
      const char sign = peek();
      const int unit = sign == '+' ? 1 : -1;
      ++pos_;
      int magnitude = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = peek() - '0';
        ++pos_;
      } else {
        while (peek() == sign) {
          ++magnitude;
          ++pos_;
        }
      }
      atom.formal_charge = unit * magnitude;
    }

    if (peek() == ':') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw ParseError(pos_, "atom class must be numeric");
      while (std::isdigit(static_cast<unsigned char>(peek())))
        ++pos_;
    }

    if (peek() != ']')
      throw ParseError(at_end() ? start : pos_,
                       at_end() ? "unbalanced bracket" : "malformed bracket atom");
    ++pos_;
    atom.implicit_h = atom.explicit_h;
    return push_atom(std::move(atom), start);
  }

  Molecule finish() {
    const int n = static_cast<int>(atoms_.size());
    std::vector<Bond> bonds;
    std::set<std::pair<int, int>> seen;
    for (const RawBond &raw : raw_bonds_) {
      const int i = std::min(raw.a, raw.b);
      const int j = std::max(raw.a, raw.b);
      if (!seen.emplace(i, j).second)
        throw ParseError(raw.offset, "duplicate bond between the same atoms");
      const bool both_aromatic = atoms_[i].aromatic && atoms_[j].aromatic;
      Bond bond;
      bond.begin = i;
      bond.end = j;
      switch (raw.symbol) {
      case BondSymbol::None:
        bond.order = both_aromatic ? BondOrder::Aromatic : BondOrder::Single;
        break;
      case BondSymbol::Single: bond.order = BondOrder::Single; break;
      case BondSymbol::Double: bond.order = BondOrder::Double; break;
      case BondSymbol::Triple: bond.order = BondOrder::Triple; break;
      case BondSymbol::Aromatic:
        if (!both_aromatic)
          throw ParseError(raw.offset,
                           "aromatic bond between non-aromatic atoms");
        bond.order = BondOrder::Aromatic;
        break;
      }
      bonds.push_back(bond);
    }

    std::vector<std::vector<Neighbor>> adjacency(static_cast<std::size_t>(n));
    for (int b = 0; b < static_cast<int>(bonds.size()); ++b) {
      adjacency[bonds[b].begin].push_back({bonds[b].end, b});
      adjacency[bonds[b].end].push_back({bonds[b].begin, b});
    }

    for (int a = 0; a < n; ++a) {
      Atom &atom = atoms_[a];
      atom.degree = static_cast<int>(adjacency[a].size());
      if (atom.degree > kMaxDegree)
        throw ParseError(atom_offsets_[a], "atom degree exceeds 5");
      if (!atom.bracket)
        assign_implicit_hydrogens(atom, a, adjacency[a], bonds);
      atom.implicit_valence = std::clamp(atom.implicit_h, 0, kMaxDegree);
    }

    mark_ring_bonds(n, bonds, adjacency);
    mark_conjugation(bonds, adjacency);

    return Molecule(std::move(atoms_), std::move(bonds));
  }

  void assign_implicit_hydrogens(Atom &atom, int index,
                                 const std::vector<Neighbor> &adjacency,
                                 const std::vector<Bond> &bonds) const {
    double order_sum = 0.0;
    for (const Neighbor &nb : adjacency)
      order_sum += valence_contribution(bonds[nb.bond].order);
    const int used = static_cast<int>(std::floor(order_sum)) - atom.formal_charge;
    const std::vector<int> valences = allowed_valences(atom.atomic_number);
    if (valences.empty()) {
      atom.implicit_h = 0;
      return;
    }
    if (atom.aromatic) {
      atom.implicit_h = std::max(0, valences.front() - used);
      return;
    }
    for (int v : valences) {
      if (v >= used) {
        atom.implicit_h = v - used;
        return;
      }
    }
    throw ParseError(atom_offsets_[index],
                     "valence of " + atom.symbol + " cannot be satisfied");
  }

  // A bond lies on a ring iff it is not a bridge.
  static void mark_ring_bonds(int n, std::vector<Bond> &bonds,
                              const std::vector<std::vector<Neighbor>> &adjacency) {
    std::vector<int> order(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n), 0);
    std::vector<bool> bridge(bonds.size(), false);
    int counter = 0;
    struct Frame {
      int atom;
      int parent_bond;
      std::size_t next;
    };
    for (int root = 0; root < n; ++root) {
      if (order[root] >= 0)
        continue;
      std::vector<Frame> stack {{root, -1, 0}};
      order[root] = low[root] = counter++;
      while (!stack.empty()) {
        Frame &top = stack.back();
        if (top.next < adjacency[top.atom].size()) {
          const Neighbor nb = adjacency[top.atom][top.next++];
          if (nb.bond == top.parent_bond)
            continue;
          if (order[nb.atom] < 0) {
            order[nb.atom] = low[nb.atom] = counter++;
            stack.push_back({nb.atom, nb.bond, 0});
          } else {
            low[top.atom] = std::min(low[top.atom], order[nb.atom]);
          }
        } else {
          const Frame done = top;
          stack.pop_back();
          if (!stack.empty()) {
            const int parent = stack.back().atom;
            low[parent] = std::min(low[parent], low[done.atom]);
            if (low[done.atom] > order[parent])
              bridge[done.parent_bond] = true;
          }
        }
      }
    }
    for (std::size_t b = 0; b < bonds.size(); ++b)
      bonds[b].in_ring = !bridge[b];
  }

  // Electrons an atom can donate into a pi system; non-positive means none.
  int donatable_electrons(const Atom &atom) const {
    const auto data = valence_data(atom.atomic_number);
    if (!data || data->default_valence <= 1)
      return -1;
    const int coordination = atom.degree + atom.implicit_h;
    if (coordination > 3)
      return -1;
    const int lone = std::max(
        data->outer_electrons - data->default_valence - atom.formal_charge, 0);
    return (data->default_valence - coordination) + lone;
  }

  bool conjugation_candidate(const Atom &atom) const {
    const auto data = valence_data(atom.atomic_number);
    if (!data)
      return false;
    const int outer = data->outer_electrons;
    const bool row_ok = atom.atomic_number <= 10 || (outer != 5 && outer != 6)
                        || (outer == 6 && atom.degree + atom.implicit_h < 2);
    return row_ok && donatable_electrons(atom) > 0;
  }

  void mark_conjugation(std::vector<Bond> &bonds,
                        const std::vector<std::vector<Neighbor>> &adjacency) const {
    for (Bond &b : bonds)
      b.conjugated = b.order == BondOrder::Aromatic;
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      const Atom &atom = atoms_[a];
      const int coordination = atom.degree + atom.implicit_h;
      if (coordination < 2 || coordination > 3 || !conjugation_candidate(atom))
        continue;
      for (const Neighbor &unsaturated : adjacency[a]) {
        if (valence_contribution(bonds[unsaturated.bond].order) < 1.5)
          continue;
        for (const Neighbor &other : adjacency[a]) {
          if (other.bond == unsaturated.bond)
            continue;
          const Atom &partner = atoms_[other.atom];
          if (partner.degree + partner.implicit_h > 3)
            continue;
          if (conjugation_candidate(partner)) {
            bonds[unsaturated.bond].conjugated = true;
            bonds[other.bond].conjugated = true;
          }
        }
      }
    }
  }

  std::string_view text_;
  ParseOptions options_;
  std::size_t pos_ = 0;
  int prev_ = -1;
  std::optional<PendingBond> pending_;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::map<int, RingOpening> rings_;
  std::vector<Atom> atoms_;
  std::vector<std::size_t> atom_offsets_;
  std::vector<RawBond> raw_bonds_;
};

}  // namespace

ParseError::ParseError(std::size_t offset, const std::string &reason)
    : std::runtime_error("offset " + std::to_string(offset) + ": " + reason),
      offset_(offset), reason_(reason) { }

Molecule::Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)),
      adjacency_(atoms_.size()) {
  const int n = num_atoms();
  std::set<std::pair<int, int>> seen;
  for (int b = 0; b < num_bonds(); ++b) {
    const Bond &bond = bonds_[b];
    if (bond.begin < 0 || bond.end >= n || bond.begin >= bond.end)
      throw std::invalid_argument("bond " + std::to_string(b)
                                  + " has invalid endpoints");
    if (!seen.emplace(bond.begin, bond.end).second)
      throw std::invalid_argument("duplicate bond " + std::to_string(b));
    if (bond.order == BondOrder::Aromatic
        && !(atoms_[bond.begin].aromatic && atoms_[bond.end].aromatic))
      throw std::invalid_argument("aromatic bond " + std::to_string(b)
                                  + " joins a non-aromatic atom");
    adjacency_[bond.begin].push_back({bond.end, b});
    adjacency_[bond.end].push_back({bond.begin, b});
  }
  for (int a = 0; a < n; ++a) {
    if (atoms_[a].degree != static_cast<int>(adjacency_[a].size()))
      throw std::invalid_argument("atom " + std::to_string(a)
                                  + " degree disagrees with its bonds");
    if (atoms_[a].degree > kMaxDegree)
      throw std::invalid_argument("atom " + std::to_string(a)
                                  + " has degree above 5");
  }
}

Molecule parse_smiles(std::string_view text, const ParseOptions &options) {
  return SmilesParser(text, options).parse();
}

std::string_view element_bucket_name(Element e) {
  static constexpr std::array<std::string_view, kNumElementBuckets> kNames = {
      "C", "N", "O", "S", "F", "P", "Cl", "Br", "I", "other"};
  return kNames[static_cast<std::size_t>(e)];
}

std::vector<FeatureBlock> atom_feature_layout() {
  std::vector<std::string> elements;
  for (std::size_t i = 0; i < kNumElementBuckets; ++i)
    elements.emplace_back(element_bucket_name(static_cast<Element>(i)));
  auto counts = [](int hi, bool open_top) {
    std::vector<std::string> out;
    for (int i = 0; i <= hi; ++i)
      out.push_back(std::to_string(i) + (open_top && i == hi ? "+" : ""));
    return out;
  };
  return {
      {"element", 0, 10, elements},
      {"degree", 10, 6, counts(5, false)},
      {"hydrogens", 16, 5, counts(4, true)},
      {"implicit_valence", 21, 6, counts(5, false)},
      {"aromatic", 27, 1, {"aromatic"}},
  };
}

std::vector<FeatureBlock> bond_feature_layout() {
  return {
      {"bond_type", 0, 4, {"single", "double", "triple", "aromatic"}},
      {"conjugated", 4, 1, {"conjugated"}},
      {"in_ring", 5, 1, {"in_ring"}},
  };
}

AtomFeatureVector atom_features(const Molecule &mol, int atom_index) {
  if (atom_index < 0 || atom_index >= mol.num_atoms())
    throw std::out_of_range("atom index " + std::to_string(atom_index)
                            + " out of range");
  const Atom &atom = mol.atom(atom_index);
  AtomFeatureVector f {};
  f[static_cast<std::size_t>(atom.element)] = 1.0;
  f[10 + static_cast<std::size_t>(std::clamp(atom.degree, 0, 5))] = 1.0;
  f[16 + static_cast<std::size_t>(std::clamp(atom.implicit_h, 0, 4))] = 1.0;
  f[21 + static_cast<std::size_t>(std::clamp(atom.implicit_valence, 0, 5))] = 1.0;
  f[27] = atom.aromatic ? 1.0 : 0.0;
  return f;
}

BondFeatureVector bond_features(const Molecule &mol, int bond_index) {
  if (bond_index < 0 || bond_index >= mol.num_bonds())
    throw std::out_of_range("bond index " + std::to_string(bond_index)
                            + " out of range");
  const Bond &bond = mol.bond(bond_index);
  BondFeatureVector f {};
  f[static_cast<std::size_t>(bond.order)] = 1.0;
  f[4] = bond.conjugated ? 1.0 : 0.0;
  f[5] = bond.in_ring ? 1.0 : 0.0;
  return f;
}

Molecule permute_atoms(const Molecule &mol, std::span<const int> perm) {
  const int n = mol.num_atoms();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permutation size does not match atom count");
  std::vector<bool> hit(static_cast<std::size_t>(n), false);
  for (int p : perm) {
    if (p < 0 || p >= n || hit[p])
      throw std::invalid_argument("not a permutation of atom indices");
    hit[p] = true;
  }
  std::vector<Atom> atoms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    atoms[perm[i]] = mol.atom(i);
  std::vector<Bond> bonds = mol.bonds();
  for (Bond &b : bonds) {
    int i = perm[b.begin];
    int j = perm[b.end];
    if (i > j)
      std::swap(i, j);
    b.begin = i;
    b.end = j;
  }
  return Molecule(std::move(atoms), std::move(bonds));
}

}  // namespace graphprint
