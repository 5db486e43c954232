//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/smiles/parser.h"

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "retrochem/smiles/element.h"

namespace retrochem {
namespace {

struct BondSymbol {
  char symbol;
  std::size_t position;
};

struct RingOpening {
  int atom = -1;
  std::optional<BondSymbol> bond;
  std::size_t slot = 0;  // index into the atom's stereo neighbor order
  std::size_t position = 0;
};

constexpr int kRingSlot = -2;

class Parser {
public:
  explicit Parser(std::string_view text): text_(text) { }

  Molecule run();

private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string &message) const {
    throw SmilesError(message, pos_);
  }
  [[noreturn]] void fail(const std::string &message,
                         std::size_t position) const {
    throw SmilesError(message, position);
  }

  void parse_organic_atom();
  void parse_bracket_atom();
  void parse_ring_closure();
  void add_atom(Atom atom, bool bracket);
  void add_bond(int begin, int end, const std::optional<BondSymbol> &symbol,
                std::size_t position);

  Molecule finish();

  std::string_view text_;
  std::size_t pos_ = 0;

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> order_;
  std::vector<bool> has_prev_;

  int prev_ = -1;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::optional<BondSymbol> pending_;
  std::array<RingOpening, 100> rings_ {};
};

Molecule Parser::run() {
  if (text_.empty())
    fail("empty SMILES");

  bool expect_atom = true;
  while (!at_end()) {
    const char c = peek();
    switch (c) {
    case '(':
      if (prev_ < 0)
        fail("branch without a preceding atom");
      if (pending_)
        fail("bond symbol before branch", pending_->position);
      branches_.emplace_back(prev_, pos_);
      ++pos_;
      expect_atom = true;
      continue;
    case ')':
      if (branches_.empty())
        fail("unmatched parenthesis ')'");
      if (pending_)
        fail("dangling bond symbol", pending_->position);
      if (expect_atom)
        fail("empty branch");
      prev_ = branches_.back().first;
      branches_.pop_back();
      ++pos_;
      continue;
    case '-':
    case '=':
    case '#':
    case ':':
    case '/':
    case '\\':
      if (prev_ < 0)
        fail("bond symbol without a preceding atom");
      if (pending_)
        fail("consecutive bond symbols");
      pending_ = BondSymbol { c, pos_ };
      ++pos_;
      expect_atom = true;
      continue;
    case '$':
      fail("quadruple bonds are not supported");
    case '.':
      if (prev_ < 0 || expect_atom)
        fail("empty fragment");
      if (pending_)
        fail("dangling bond symbol", pending_->position);
      if (!branches_.empty())
        fail("fragment separator inside a branch");
      prev_ = -1;
      ++pos_;
      expect_atom = true;
      continue;
    case '%':
    case '0':
    case '1':
    case '2':
    case '3':
    case '4':
    case '5':
    case '6':
    case '7':
    case '8':
    case '9':
      if (prev_ < 0)
        fail("ring closure without a preceding atom");
      parse_ring_closure();
      continue;
    case '[':
      parse_bracket_atom();
      expect_atom = false;
      continue;
    case '*':
      fail("wildcard atoms are not supported");
    default:
      if (std::isspace(static_cast<unsigned char>(c)))
        fail("unexpected whitespace");
      parse_organic_atom();
      expect_atom = false;
      continue;
    }
  }

  if (pending_)
    fail("dangling bond symbol", pending_->position);
  if (!branches_.empty())
    fail("unmatched parenthesis '('", branches_.back().second);
  if (expect_atom)
    fail("SMILES ends without an atom");
  for (int d = 0; d < 100; ++d) {
    if (rings_[d].atom >= 0)
      fail("unmatched ring closure " + std::to_string(d), rings_[d].position);
  }
  return finish();
}

void Parser::parse_organic_atom() {
  Atom atom;
  const char c = peek();
  std::size_t length = 1;
  switch (c) {
  case 'B':
    if (peek(1) == 'r') {
      atom.element = 35;
      length = 2;
    } else {
      atom.element = 5;
    }
    break;
  case 'C':
    if (peek(1) == 'l') {
      atom.element = 17;
      length = 2;
    } else {
      atom.element = 6;
    }
    break;
  case 'N':
    atom.element = 7;
    break;
  case 'O':
    atom.element = 8;
    break;
  case 'P':
    atom.element = 15;
    break;
  case 'S':
    atom.element = 16;
    break;
  case 'F':
    atom.element = 9;
    break;
  case 'I':
    atom.element = 53;
    break;
  case 'b':
    atom.element = 5;
    atom.aromatic = true;
    break;
  case 'c':
    atom.element = 6;
    atom.aromatic = true;
    break;
  case 'n':
    atom.element = 7;
    atom.aromatic = true;
    break;
  case 'o':
    atom.element = 8;
    atom.aromatic = true;
    break;
  case 'p':
    atom.element = 15;
    atom.aromatic = true;
    break;
  case 's':
    atom.element = 16;
    atom.aromatic = true;
    break;
  default:
    if (std::isalpha(static_cast<unsigned char>(c)))
      fail(std::string("unknown element '") + c
           + "' (only the organic subset may appear outside brackets)");
    fail(std::string("unexpected character '") + c + "'");
  }
  pos_ += length;
  add_atom(atom, false);
}

void Parser::parse_bracket_atom() {
  const std::size_t start = pos_;
  ++pos_;  // '['
  Atom atom;

  if (std::isdigit(static_cast<unsigned char>(peek()))) {
    int isotope = 0;
    int digits = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      isotope = isotope * 10 + (peek() - '0');
      ++pos_;
      if (++digits > 3)
        fail("isotope has too many digits");
    }
    atom.isotope = isotope;
  }

  const char c = peek();
  if (c == '*')
    fail("wildcard atoms are not supported");
  if (std::isupper(static_cast<unsigned char>(c))) {
    int z = 0;
    if (std::islower(static_cast<unsigned char>(peek(1)))) {
      z = find_element(text_.substr(pos_, 2));
      if (z > 0)
        pos_ += 2;
    }
    if (z == 0) {
      z = find_element(text_.substr(pos_, 1));
      if (z == 0)
        fail("unknown element");
      pos_ += 1;
    }
    atom.element = z;
  } else if (std::islower(static_cast<unsigned char>(c))) {
    const std::string_view two = text_.substr(pos_, 2);
    if (two == "se" || two == "as") {
      atom.element = two == "se" ? 34 : 33;
      pos_ += 2;
    } else {
      switch (c) {
      case 'b':
        atom.element = 5;
        break;
      case 'c':
        atom.element = 6;
        break;
      case 'n':
        atom.element = 7;
        break;
      case 'o':
        atom.element = 8;
        break;
      case 'p':
        atom.element = 15;
        break;
      case 's':
        atom.element = 16;
        break;
      default:
        fail("unknown aromatic element");
      }
      pos_ += 1;
    }
    atom.aromatic = true;
  } else {
    fail("expected element symbol in bracket atom");
  }

  if (peek() == '@') {
    ++pos_;
    atom.chirality = Chirality::kCounterClockwise;
    if (peek() == '@') {
      ++pos_;
      atom.chirality = Chirality::kClockwise;
    }
    const char next = peek();
    if (next == 'T' || next == 'A' || next == 'S' || next == 'O'
        || std::isdigit(static_cast<unsigned char>(next)))
      fail("only tetrahedral @/@@ chirality is supported");
  }

  int hydrogens = 0;
  if (peek() == 'H') {
    ++pos_;
    hydrogens = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      hydrogens = peek() - '0';
      ++pos_;
    }
  }
  atom.explicit_hydrogens = hydrogens;

  if (peek() == '+' || peek() == '-') {
    const char sign = peek();
    const int unit = sign == '+' ? 1 : -1;
    ++pos_;
    int magnitude = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      magnitude = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = magnitude * 10 + (peek() - '0');
        ++pos_;
        if (magnitude > 99)
          break;
      }
    } else {
      while (peek() == sign) {
        ++magnitude;
        ++pos_;
      }
    }
    if (magnitude > 4)
      fail("charge outside [-4, 4]");
    atom.charge = unit * magnitude;
  }

  if (peek() == ':')
    fail("atom maps are not supported");
  if (peek() != ']') {
    if (at_end())
      fail("unterminated bracket atom", start);
    fail("unexpected character in bracket atom");
  }
  ++pos_;
  add_atom(atom, true);
}

void Parser::add_atom(Atom atom, bool bracket) {
  const int index = static_cast<int>(atoms_.size());
  atoms_.push_back(atom);
  order_.emplace_back();
  has_prev_.push_back(prev_ >= 0);
  if (prev_ >= 0) {
    add_bond(prev_, index, pending_, pos_);
    order_[prev_].push_back(index);
    order_[index].push_back(prev_);
  }
  if (bracket && atom.chirality != Chirality::kNone
      && atom.explicit_hydrogens.value_or(0) == 1)
    order_[index].push_back(kImplicitNeighbor);
  pending_.reset();
  prev_ = index;
}

void Parser::add_bond(int begin, int end,
                      const std::optional<BondSymbol> &symbol,
                      std::size_t position) {
  Bond bond;
  bond.begin = begin;
  bond.end = end;
  if (!symbol) {
    bond.order = atoms_[begin].aromatic && atoms_[end].aromatic
                     ? BondOrder::kAromatic
                     : BondOrder::kSingle;
  } else {
    switch (symbol->symbol) {
    case '-':
      bond.order = BondOrder::kSingle;
      break;
    case '=':
      bond.order = BondOrder::kDouble;
      break;
    case '#':
      bond.order = BondOrder::kTriple;
      break;
    case ':':
      bond.order = BondOrder::kAromatic;
      break;
    case '/':
      bond.order = BondOrder::kSingle;
      bond.direction = BondDirection::kUp;
      break;
    case '\\':
      bond.order = BondOrder::kSingle;
      bond.direction = BondDirection::kDown;
      break;
    default:
      fail("invalid bond symbol", symbol->position);
    }
  }
  for (const Bond &b: bonds_) {
    if ((b.begin == begin && b.end == end)
        || (b.begin == end && b.end == begin))
      fail("duplicate bond between the same atom pair", position);
  }
  bonds_.push_back(bond);
}

void Parser::parse_ring_closure() {
  const std::size_t start = pos_;
  int digit = 0;
  if (peek() == '%') {
    if (!std::isdigit(static_cast<unsigned char>(peek(1)))
        || !std::isdigit(static_cast<unsigned char>(peek(2))))
      fail("'%' must be followed by two digits");
    digit = (peek(1) - '0') * 10 + (peek(2) - '0');
    pos_ += 3;
  } else {
    digit = peek() - '0';
    ++pos_;
  }

  RingOpening &ring = rings_[digit];
  if (ring.atom < 0) {
    ring.atom = prev_;
    ring.bond = pending_;
    ring.slot = order_[prev_].size();
    ring.position = start;
    order_[prev_].push_back(kRingSlot);
    pending_.reset();
    return;
  }

  const int opener = ring.atom;
  if (opener == prev_)
    fail("ring closure " + std::to_string(digit) + " bonds an atom to itself",
         start);
  std::optional<BondSymbol> symbol = ring.bond;
  int begin = opener;
  int end = prev_;
  if (pending_) {
    if (symbol && symbol->symbol != pending_->symbol)
      fail("conflicting bond symbols on ring closure "
               + std::to_string(digit),
           pending_->position);
    if (!symbol) {
      symbol = pending_;
      begin = prev_;
      end = opener;
    }
  }
  add_bond(begin, end, symbol, start);
  order_[opener][ring.slot] = prev_;
  order_[prev_].push_back(opener);
  pending_.reset();
  ring = RingOpening {};
}

Molecule Parser::finish() {
  Molecule graph;
  try {
    graph = Molecule(atoms_, bonds_);
  } catch (const MoleculeError &e) {
    throw SmilesError(e.what(), 0);
  }

  std::vector<TetrahedralCenter> centers;
  for (int i = 0; i < graph.num_atoms(); ++i) {
    if (atoms_[i].chirality == Chirality::kNone)
      continue;
    std::vector<int> order = order_[i];
    if (order.size() == 3 && atoms_[i].explicit_hydrogens.value_or(0) == 0)
      order.insert(order.begin() + (has_prev_[i] ? 1 : 0), kImplicitNeighbor);
    if (order.size() != 4) {
      atoms_[i].chirality = Chirality::kNone;
      continue;
    }
    TetrahedralCenter center;
    center.atom = i;
    std::copy(order.begin(), order.end(), center.neighbors.begin());
    centers.push_back(center);
  }

  auto up_from = [&](int atom, int bond_index) {
    const Bond &b = bonds_[bond_index];
    return b.begin == atom ? b.direction == BondDirection::kUp
                           : b.direction == BondDirection::kDown;
  };
  auto directional_neighbor = [&](int atom, int exclude) {
    for (const Neighbor &nb: graph.neighbors(atom)) {
      if (nb.atom != exclude
          && bonds_[nb.bond].direction != BondDirection::kNone)
        return nb;
    }
    return Neighbor { -1, -1 };
  };

  std::vector<DoubleBondStereo> double_bonds;
  for (int b = 0; b < graph.num_bonds(); ++b) {
    const Bond &bond = bonds_[b];
    if (bond.order != BondOrder::kDouble || graph.bond_in_ring(b))
      continue;
    const Neighbor nb = directional_neighbor(bond.begin, bond.end);
    const Neighbor ne = directional_neighbor(bond.end, bond.begin);
    if (nb.atom < 0 || ne.atom < 0)
      continue;
    const bool cis = up_from(bond.begin, nb.bond) == up_from(bond.end, ne.bond);
    double_bonds.push_back({ b, nb.atom, ne.atom, cis });
  }

  try {
    return Molecule(std::move(atoms_), std::move(bonds_), std::move(centers),
                    std::move(double_bonds));
  } catch (const MoleculeError &e) {
    throw SmilesError(e.what(), 0);
  }
}

}  // namespace

Molecule parse_smiles(std::string_view text) {
  return Parser(text).run();
}

}  // namespace retrochem
