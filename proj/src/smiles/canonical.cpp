//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/smiles/canonical.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "retrochem/smiles/element.h"
#include "retrochem/smiles/parser.h"
#include "retrochem/smiles/validity.h"

namespace retrochem {
namespace {

// Depth-first traversal plus text emission for one fixed visiting priority.
class Writer {
public:
  Writer(const Molecule &mol, std::span<const int> priority, bool stereo)
      : mol_(mol), priority_(priority), stereo_(stereo),
        preorder_(mol.num_atoms(), -1), parent_bond_(mol.num_atoms(), -1),
        on_stack_(mol.num_atoms(), false), bond_used_(mol.num_bonds(), false),
        children_(mol.num_atoms()), ring_open_(mol.num_atoms()),
        ring_close_(mol.num_atoms()), bond_char_(mol.num_bonds(), 0),
        digit_of_(mol.num_bonds(), -1) { }

  std::string run() {
    const int n = mol_.num_atoms();
    std::vector<int> roots;
    std::vector<int> by_priority(n);
    std::iota(by_priority.begin(), by_priority.end(), 0);
    std::sort(by_priority.begin(), by_priority.end(),
              [&](int a, int b) { return priority_[a] < priority_[b]; });
    for (int v: by_priority) {
      if (preorder_[v] >= 0)
        continue;
      roots.push_back(v);
      traverse(v, -1);
    }
    if (stereo_)
      assign_bond_directions();

    std::string out;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (i > 0)
        out += '.';
      std::fill(digit_used_.begin(), digit_used_.end(), false);
      emit(roots[i], out);
    }
    return out;
  }

private:
  void traverse(int v, int parent_bond) {
    preorder_[v] = counter_++;
    on_stack_[v] = true;
    std::vector<Neighbor> nbrs(mol_.neighbors(v).begin(),
                               mol_.neighbors(v).end());
    std::sort(nbrs.begin(), nbrs.end(), [&](Neighbor a, Neighbor b) {
      return priority_[a.atom] < priority_[b.atom];
    });
    for (const Neighbor &nb: nbrs) {
      if (nb.bond == parent_bond)
        continue;
      if (preorder_[nb.atom] < 0) {
        parent_bond_[nb.atom] = nb.bond;
        bond_used_[nb.bond] = true;
        children_[v].push_back(nb.atom);
        traverse(nb.atom, nb.bond);
      } else if (on_stack_[nb.atom] && !bond_used_[nb.bond]) {
        bond_used_[nb.bond] = true;
        ring_open_[nb.atom].push_back(nb.bond);
        ring_close_[v].push_back(nb.bond);
      }
    }
    on_stack_[v] = false;
  }

  bool is_tree_edge(int bond) const {
    const Bond &b = mol_.bond(bond);
    return parent_bond_[b.begin] == bond || parent_bond_[b.end] == bond;
  }

  // The atom written first of the two joined by a tree edge.
  int tree_parent(int bond) const {
    const Bond &b = mol_.bond(bond);
    return parent_bond_[b.end] == bond ? b.begin : b.end;
  }

  bool up_from(int atom, int bond) const {
    const bool slash = bond_char_[bond] == '/';
    return tree_parent(bond) == atom ? slash : !slash;
  }

  void set_up_from(int atom, int bond, bool up) {
    const bool slash = tree_parent(bond) == atom ? up : !up;
    bond_char_[bond] = slash ? '/' : '\\';
  }

  // Single tree edge at `end` usable to carry a direction mark.
  int marker_bond(int end, int partner) const {
    int best = -1;
    int best_pre = 0;
    for (const Neighbor &nb: mol_.neighbors(end)) {
      if (nb.atom == partner || !is_tree_edge(nb.bond)
          || mol_.bond(nb.bond).order != BondOrder::kSingle)
        continue;
      if (bond_char_[nb.bond] != 0)
        return nb.bond;
      if (best < 0 || preorder_[nb.atom] < best_pre) {
        best = nb.bond;
        best_pre = preorder_[nb.atom];
      }
    }
    return best;
  }

  void assign_bond_directions() {
    std::vector<const DoubleBondStereo *> todo;
    for (const DoubleBondStereo &db: mol_.double_bond_stereo())
      todo.push_back(&db);
    auto text_pos = [&](const DoubleBondStereo *db) {
      const Bond &b = mol_.bond(db->bond);
      return std::max(preorder_[b.begin], preorder_[b.end]);
    };
    std::sort(todo.begin(), todo.end(),
              [&](const DoubleBondStereo *a, const DoubleBondStereo *b) {
                return text_pos(a) < text_pos(b);
              });

    for (const DoubleBondStereo *db: todo) {
      const Bond &bond = mol_.bond(db->bond);
      const int x = tree_parent(db->bond);
      const int y = bond.other(x);
      const int ref_x = x == bond.begin ? db->ref_begin : db->ref_end;
      const int ref_y = x == bond.begin ? db->ref_end : db->ref_begin;
      const int ex = marker_bond(x, y);
      const int ey = marker_bond(y, x);
      if (ex < 0 || ey < 0)
        continue;
      bool cis = db->cis;
      if (mol_.bond(ex).other(x) != ref_x)
        cis = !cis;
      if (mol_.bond(ey).other(y) != ref_y)
        cis = !cis;

      if (bond_char_[ex] == 0 && bond_char_[ey] == 0) {
        bond_char_[ex] = '/';
        const bool ux = up_from(x, ex);
        set_up_from(y, ey, cis ? ux : !ux);
      } else if (bond_char_[ey] == 0) {
        const bool ux = up_from(x, ex);
        set_up_from(y, ey, cis ? ux : !ux);
      } else if (bond_char_[ex] == 0) {
        const bool uy = up_from(y, ey);
        set_up_from(x, ex, cis ? uy : !uy);
      }
    }
  }

  Chirality written_chirality(int v) const {
    const Atom &a = mol_.atom(v);
    if (!stereo_ || a.chirality == Chirality::kNone)
      return Chirality::kNone;
    const TetrahedralCenter *center = mol_.tetrahedral_center(v);
    if (center == nullptr)
      return Chirality::kNone;

    std::vector<int> order;
    if (parent_bond_[v] >= 0)
      order.push_back(mol_.bond(parent_bond_[v]).other(v));
    if (std::find(center->neighbors.begin(), center->neighbors.end(),
                  kImplicitNeighbor)
        != center->neighbors.end())
      order.push_back(kImplicitNeighbor);
    for (int b: ring_close_[v])
      order.push_back(mol_.bond(b).other(v));
    for (int b: ring_open_[v])
      order.push_back(mol_.bond(b).other(v));
    for (int c: children_[v])
      order.push_back(c);
    if (order.size() != 4)
      return Chirality::kNone;

    std::array<int, 4> perm {};
    for (int i = 0; i < 4; ++i) {
      auto it = std::find(center->neighbors.begin(), center->neighbors.end(),
                          order[i]);
      if (it == center->neighbors.end())
        return Chirality::kNone;
      perm[i] = static_cast<int>(it - center->neighbors.begin());
    }
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        inversions += perm[i] > perm[j];
    return inversions % 2 == 0 ? a.chirality : flip(a.chirality);
  }

  void append_atom(int v, std::string &out) const {
    const Atom &a = mol_.atom(v);
    const Chirality chir = written_chirality(v);
    const int h = mol_.hydrogen_count(v);
    const std::string_view symbol = element(a.element).symbol;
    const bool bare_aromatic_ok
        = !a.aromatic
          || (a.element == 5 || a.element == 6 || a.element == 7
              || a.element == 8 || a.element == 15 || a.element == 16);
    const bool bare = chir == Chirality::kNone && a.charge == 0
                      && !a.isotope && is_organic_subset(a.element)
                      && bare_aromatic_ok
                      && h == default_implicit_hydrogens(mol_, v);

    auto append_symbol = [&]() {
      if (!a.aromatic) {
        out += symbol;
        return;
      }
      out += static_cast<char>(symbol[0] - 'A' + 'a');
      out += symbol.substr(1);
    };

    if (bare) {
      append_symbol();
      return;
    }
    out += '[';
    if (a.isotope)
      out += std::to_string(*a.isotope);
    append_symbol();
    if (chir == Chirality::kCounterClockwise)
      out += '@';
    else if (chir == Chirality::kClockwise)
      out += "@@";
    if (h > 0) {
      out += 'H';
      if (h > 1)
        out += std::to_string(h);
    }
    if (a.charge != 0) {
      out += a.charge > 0 ? '+' : '-';
      if (std::abs(a.charge) > 1)
        out += std::to_string(std::abs(a.charge));
    }
    out += ']';
  }

  void append_bond(int bond, std::string &out) const {
    if (bond_char_[bond] != 0) {
      out += bond_char_[bond];
      return;
    }
    const Bond &b = mol_.bond(bond);
    const bool both_aromatic
        = mol_.atom(b.begin).aromatic && mol_.atom(b.end).aromatic;
    switch (b.order) {
    case BondOrder::kSingle:
      if (both_aromatic)
        out += '-';
      break;
    case BondOrder::kDouble:
      out += '=';
      break;
    case BondOrder::kTriple:
      out += '#';
      break;
    case BondOrder::kAromatic:
      if (!both_aromatic)
        out += ':';
      break;
    }
  }

  static void append_digit(int d, std::string &out) {
    if (d < 10) {
      out += static_cast<char>('0' + d);
    } else {
      out += '%';
      out += std::to_string(d);
    }
  }

  void emit(int v, std::string &out) {
    append_atom(v, out);
    for (int b: ring_close_[v]) {
      append_digit(digit_of_[b], out);
      digit_used_[digit_of_[b]] = false;
    }
    for (int b: ring_open_[v]) {
      int d = 1;
      while (d < static_cast<int>(digit_used_.size()) && digit_used_[d])
        ++d;
      if (d == static_cast<int>(digit_used_.size()))
        throw CanonicalizeError("more than 99 open ring closures");
      digit_used_[d] = true;
      digit_of_[b] = d;
      append_bond(b, out);
      append_digit(d, out);
    }
    const std::vector<int> &kids = children_[v];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool branch = i + 1 < kids.size();
      if (branch)
        out += '(';
      append_bond(parent_bond_[kids[i]], out);
      emit(kids[i], out);
      if (branch)
        out += ')';
    }
  }

  const Molecule &mol_;
  std::span<const int> priority_;
  bool stereo_;
  int counter_ = 0;
  std::vector<int> preorder_;
  std::vector<int> parent_bond_;
  std::vector<bool> on_stack_;
  std::vector<bool> bond_used_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<int>> ring_open_;
  std::vector<std::vector<int>> ring_close_;
  std::vector<char> bond_char_;
  std::vector<int> digit_of_;
  std::vector<bool> digit_used_ = std::vector<bool>(100, false);
};

// Dense ranks (0..c-1) for the stereo-free atom invariant.
std::vector<int> initial_ranks(const Molecule &mol) {
  const int n = mol.num_atoms();
  using Key = std::array<int, 7>;
  std::vector<Key> keys(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = mol.atom(i);
    keys[i] = { a.element, a.isotope.value_or(-1), a.charge,
                a.aromatic ? 1 : 0, mol.degree(i), mol.hydrogen_count(i),
                mol.in_ring(i) ? 1 : 0 };
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> rank(n);
  int r = 0;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && keys[order[i]] != keys[order[i - 1]])
      ++r;
    rank[order[i]] = r;
  }
  return rank;
}

// Splits classes by (rank, sorted neighbor (rank, bond order)) until stable.
// Returns the number of classes.
int refine(const Molecule &mol, std::vector<int> &rank) {
  const int n = mol.num_atoms();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return rank[a] < rank[b]; });
  int classes = 0;
  {
    std::vector<int> dense(n);
    for (int i = 0; i < n; ++i) {
      if (i > 0 && rank[order[i]] != rank[order[i - 1]])
        ++classes;
      dense[order[i]] = classes;
    }
    rank = std::move(dense);
    classes = n == 0 ? 0 : classes + 1;
  }
  std::vector<std::vector<int>> sig(n);
  while (classes < n) {
    for (int i = 0; i < n; ++i) {
      sig[i].clear();
      for (const Neighbor &nb: mol.neighbors(i))
        sig[i].push_back(rank[nb.atom] * 8
                         + static_cast<int>(mol.bond(nb.bond).order));
      std::sort(sig[i].begin(), sig[i].end());
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (rank[a] != rank[b])
        return rank[a] < rank[b];
      return sig[a] < sig[b];
    });
    std::vector<int> next(n);
    int r = 0;
    for (int i = 0; i < n; ++i) {
      const int a = order[i];
      if (i > 0) {
        const int p = order[i - 1];
        if (rank[a] != rank[p] || sig[a] != sig[p])
          ++r;
      }
      next[a] = r;
    }
    rank = std::move(next);
    if (r + 1 == classes)
      break;
    classes = r + 1;
  }
  return classes;
}

class CanonicalSearch {
public:
  CanonicalSearch(const Molecule &mol, bool stereo)
      : mol_(mol), stereo_(stereo) {
    if (!stereo)
      return;
    for (const DoubleBondStereo &db: mol.double_bond_stereo()) {
      stereo_atoms_.push_back(mol.bond(db.bond).begin);
      stereo_atoms_.push_back(mol.bond(db.bond).end);
    }
    for (const TetrahedralCenter &c: mol.tetrahedral_centers())
      stereo_atoms_.push_back(c.atom);
  }

  std::string run() {
    std::vector<int> rank = initial_ranks(mol_);
    search(std::move(rank));
    return best_;
  }

private:
  bool is_stereo_atom(int atom) const {
    return std::find(stereo_atoms_.begin(), stereo_atoms_.end(), atom)
           != stereo_atoms_.end();
  }

  void search(std::vector<int> rank) {
    const int n = mol_.num_atoms();
    const int classes = refine(mol_, rank);
    if (classes == n) {
      std::string s = Writer(mol_, rank, stereo_).run();
      if (leaves_ == 0 || s < best_)
        best_ = std::move(s);
      ++leaves_;
      return;
    }

    std::vector<int> count(classes, 0);
    for (int r: rank)
      ++count[r];
    int target = 0;
    while (count[target] < 2)
      ++target;

    std::vector<int> members;
    std::vector<int> seen_parents;
    for (int i = 0; i < n; ++i) {
      if (rank[i] != target)
        continue;
      // Equivalent terminal atoms on a shared non-stereo parent give the
      // same string; one representative is enough.
      if (mol_.degree(i) == 1) {
        const int parent = mol_.neighbors(i)[0].atom;
        if (!is_stereo_atom(parent)) {
          if (std::find(seen_parents.begin(), seen_parents.end(), parent)
              != seen_parents.end())
            continue;
          seen_parents.push_back(parent);
        }
      }
      members.push_back(i);
    }

    for (int chosen: members) {
      std::vector<int> next(n);
      for (int i = 0; i < n; ++i)
        next[i] = 2 * rank[i] + (i == chosen ? 0 : 1);
      search(std::move(next));
      if (leaves_ >= kCanonicalLeafBudget)
        break;
    }
  }

  const Molecule &mol_;
  bool stereo_;
  std::vector<int> stereo_atoms_;
  std::string best_;
  int leaves_ = 0;
};

std::string canonicalize_connected(const Molecule &mol, bool stereo) {
  if (mol.empty())
    return {};
  return CanonicalSearch(mol, stereo).run();
}

std::vector<int> component_atoms(const Molecule &mol, int component) {
  std::vector<int> atoms;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    if (mol.component(i) == component)
      atoms.push_back(i);
  }
  return atoms;
}

}  // namespace

std::string canonicalize(const Molecule &mol,
                         const CanonicalOptions &options) {
  if (options.require_valid) {
    const ValidityReport report = check_validity(mol);
    if (!report.valid)
      throw CanonicalizeError("cannot canonicalize invalid molecule: "
                              + report.failures.front().detail);
  }
  if (mol.num_components() <= 1)
    return canonicalize_connected(mol, options.stereo);

  std::vector<std::string> parts;
  for (int c = 0; c < mol.num_components(); ++c) {
    const std::vector<int> atoms = component_atoms(mol, c);
    parts.push_back(canonicalize_connected(induced_submolecule(mol, atoms),
                                           options.stereo));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0)
      out += '.';
    out += parts[i];
  }
  return out;
}

std::string canonical_smiles(std::string_view smiles,
                             const CanonicalOptions &options) {
  return canonicalize(parse_smiles(smiles), options);
}

std::string write_smiles(const Molecule &mol, std::span<const int> priority,
                         bool stereo) {
  if (static_cast<int>(priority.size()) != mol.num_atoms())
    throw std::invalid_argument("write_smiles: priority size mismatch");
  return Writer(mol, priority, stereo).run();
}

std::string random_smiles(const Molecule &mol, std::uint64_t seed,
                          bool stereo) {
  std::vector<int> priority(mol.num_atoms());
  std::iota(priority.begin(), priority.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(priority.begin(), priority.end(), rng);
  return Writer(mol, priority, stereo).run();
}

std::vector<Molecule> split_fragments(const Molecule &mol) {
  std::vector<Molecule> out;
  if (mol.num_components() == 1) {
    out.push_back(mol);
    return out;
  }
  for (int c = 0; c < mol.num_components(); ++c)
    out.push_back(induced_submolecule(mol, component_atoms(mol, c)));
  return out;
}

std::vector<Molecule> split_fragments(std::string_view smiles) {
  return split_fragments(parse_smiles(smiles));
}

std::size_t largest_fragment_index(std::span<const Molecule> mols) {
  if (mols.empty())
    throw std::invalid_argument("largest_fragment: empty list");
  const CanonicalOptions unchecked { true, false };
  std::size_t best = 0;
  int best_heavy = mols[0].heavy_atom_count();
  double best_mw = molecular_weight(mols[0]);
  std::string best_smiles;
  bool have_smiles = false;
  for (std::size_t i = 1; i < mols.size(); ++i) {
    const int heavy = mols[i].heavy_atom_count();
    if (heavy != best_heavy) {
      if (heavy > best_heavy) {
        best = i;
        best_heavy = heavy;
        best_mw = molecular_weight(mols[i]);
        have_smiles = false;
      }
      continue;
    }
    const double mw = molecular_weight(mols[i]);
    if (mw != best_mw) {
      if (mw > best_mw) {
        best = i;
        best_mw = mw;
        have_smiles = false;
      }
      continue;
    }
    if (!have_smiles) {
      best_smiles = canonicalize(mols[best], unchecked);
      have_smiles = true;
    }
    std::string s = canonicalize(mols[i], unchecked);
    if (s > best_smiles) {
      best = i;
      best_smiles = std::move(s);
    }
  }
  return best;
}

const Molecule &largest_fragment(std::span<const Molecule> mols) {
  return mols[largest_fragment_index(mols)];
}

}  // namespace retrochem
