//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/smiles/molecule.h"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "retrochem/smiles/element.h"

namespace retrochem {
namespace {

constexpr std::array<int, 1> kB = { 3 };
constexpr std::array<int, 1> kC = { 4 };
constexpr std::array<int, 2> kN = { 3, 5 };
constexpr std::array<int, 1> kO = { 2 };
constexpr std::array<int, 2> kP = { 3, 5 };
constexpr std::array<int, 3> kS = { 2, 4, 6 };
constexpr std::array<int, 1> kHalogen = { 1 };

int implicit_hydrogens(int element, bool aromatic, int order_sum) {
  std::span<const int> valences = organic_valences(element);
  if (valences.empty())
    return 0;
  for (int v: valences) {
    if (v >= order_sum) {
      int h = v - order_sum;
      if (aromatic)
        h -= 1;
      return std::max(h, 0);
    }
  }
  return 0;
}

// Marks bridges with an iterative Tarjan low-link pass.
std::vector<bool> find_ring_bonds(int n, const std::vector<Bond> &bonds,
                                  std::span<const Neighbor> adjacency,
                                  std::span<const int> offset) {
  std::vector<bool> in_ring(bonds.size(), true);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    int next;
  };
  std::vector<Frame> stack;
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0)
      continue;
    disc[root] = low[root] = timer++;
    stack.push_back({ root, -1, offset[root] });
    while (!stack.empty()) {
      Frame &f = stack.back();
      if (f.next < offset[f.atom + 1]) {
        const Neighbor nb = adjacency[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        if (disc[nb.atom] < 0) {
          disc[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({ nb.atom, nb.bond, offset[nb.atom] });
        } else {
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        Frame &parent = stack.back();
        low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
        if (low[done.atom] > disc[parent.atom])
          in_ring[done.parent_bond] = false;
      }
    }
  }
  return in_ring;
}

}  // namespace

std::span<const int> organic_valences(int element) {
  switch (element) {
  case 5:
    return kB;
  case 6:
    return kC;
  case 7:
    return kN;
  case 8:
    return kO;
  case 15:
    return kP;
  case 16:
    return kS;
  case 9:
  case 17:
  case 35:
  case 53:
    return kHalogen;
  default:
    return {};
  }
}

bool is_organic_subset(int element) {
  return !organic_valences(element).empty();
}

bool aromatic_capable(int element) {
  switch (element) {
  case 5:   // B
  case 6:   // C
  case 7:   // N
  case 8:   // O
  case 15:  // P
  case 16:  // S
  case 33:  // As
  case 34:  // Se
    return true;
  default:
    return false;
  }
}

int bond_order_sum(const Molecule &mol, int atom) {
  int sum = 0;
  for (const Neighbor &nb: mol.neighbors(atom)) {
    const BondOrder order = mol.bond(nb.bond).order;
    sum += order == BondOrder::kAromatic ? 1 : static_cast<int>(order);
  }
  return sum;
}

int default_implicit_hydrogens(const Molecule &mol, int atom) {
  return implicit_hydrogens(mol.atom(atom).element, mol.atom(atom).aromatic,
                            bond_order_sum(mol, atom));
}

Molecule::Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds,
                   std::vector<TetrahedralCenter> centers,
                   std::vector<DoubleBondStereo> double_bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  const int n = num_atoms();
  for (int i = 0; i < n; ++i) {
    const Atom &a = atoms_[i];
    if (a.element < 1 || a.element > kNumElements)
      throw MoleculeError("atom " + std::to_string(i) + ": unknown element");
    if (a.charge < -4 || a.charge > 4)
      throw MoleculeError("atom " + std::to_string(i)
                          + ": charge outside [-4, 4]");
    if (a.explicit_hydrogens && (*a.explicit_hydrogens < 0
                                 || *a.explicit_hydrogens > 9))
      throw MoleculeError("atom " + std::to_string(i)
                          + ": hydrogen count outside [0, 9]");
    if (a.isotope && *a.isotope < 0)
      throw MoleculeError("atom " + std::to_string(i) + ": negative isotope");
    if (a.aromatic && !aromatic_capable(a.element))
      throw MoleculeError("atom " + std::to_string(i)
                          + ": element cannot be aromatic");
  }

  std::set<std::pair<int, int>> seen;
  std::vector<int> degree(n, 0);
  for (int b = 0; b < num_bonds(); ++b) {
    const Bond &bond = bonds_[b];
    if (bond.begin < 0 || bond.begin >= n || bond.end < 0 || bond.end >= n)
      throw MoleculeError("bond " + std::to_string(b)
                          + ": atom index out of range");
    if (bond.begin == bond.end)
      throw MoleculeError("bond " + std::to_string(b) + ": self loop");
    if (!seen.emplace(std::minmax(bond.begin, bond.end)).second)
      throw MoleculeError("bond " + std::to_string(b) + ": duplicate bond");
    if (bond.direction != BondDirection::kNone
        && bond.order != BondOrder::kSingle)
      throw MoleculeError("bond " + std::to_string(b)
                          + ": direction on a non-single bond");
    ++degree[bond.begin];
    ++degree[bond.end];
  }

  adj_offset_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    adj_offset_[i + 1] = adj_offset_[i] + degree[i];
  adjacency_.resize(adj_offset_[n]);
  std::vector<int> fill(adj_offset_.begin(), adj_offset_.end() - 1);
  for (int b = 0; b < num_bonds(); ++b) {
    adjacency_[fill[bonds_[b].begin]++] = { bonds_[b].end, b };
    adjacency_[fill[bonds_[b].end]++] = { bonds_[b].begin, b };
  }

  hydrogens_.resize(n);
  for (int i = 0; i < n; ++i) {
    hydrogens_[i] = atoms_[i].explicit_hydrogens
                        ? *atoms_[i].explicit_hydrogens
                        : default_implicit_hydrogens(*this, i);
  }

  bond_in_ring_ = find_ring_bonds(n, bonds_, adjacency_, adj_offset_);
  atom_in_ring_.assign(n, false);
  for (int b = 0; b < num_bonds(); ++b) {
    if (bond_in_ring_[b]) {
      atom_in_ring_[bonds_[b].begin] = true;
      atom_in_ring_[bonds_[b].end] = true;
    }
  }

  component_.assign(n, -1);
  std::vector<int> queue;
  for (int root = 0; root < n; ++root) {
    if (component_[root] >= 0)
      continue;
    component_[root] = num_components_;
    queue.assign(1, root);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      for (const Neighbor &nb: neighbors(queue[q])) {
        if (component_[nb.atom] < 0) {
          component_[nb.atom] = num_components_;
          queue.push_back(nb.atom);
        }
      }
    }
    ++num_components_;
  }

  // Keep only self-consistent stereo entries.
  std::vector<bool> has_center(n, false);
  for (const TetrahedralCenter &c: centers) {
    if (c.atom < 0 || c.atom >= n || has_center[c.atom]
        || atoms_[c.atom].chirality == Chirality::kNone)
      continue;
    std::vector<int> real;
    int implicit = 0;
    for (int r: c.neighbors) {
      if (r == kImplicitNeighbor)
        ++implicit;
      else
        real.push_back(r);
    }
    std::vector<int> actual;
    for (const Neighbor &nb: neighbors(c.atom))
      actual.push_back(nb.atom);
    std::sort(real.begin(), real.end());
    std::sort(actual.begin(), actual.end());
    if (real != actual || implicit > 1 || hydrogens_[c.atom] > 1
        || (implicit == 0 && hydrogens_[c.atom] != 0))
      continue;
    has_center[c.atom] = true;
    centers_.push_back(c);
  }
  for (int i = 0; i < n; ++i) {
    if (!has_center[i])
      atoms_[i].chirality = Chirality::kNone;
  }
  std::sort(centers_.begin(), centers_.end(),
            [](const auto &a, const auto &b) { return a.atom < b.atom; });

  std::vector<bool> has_db(num_bonds(), false);
  for (const DoubleBondStereo &s: double_bonds) {
    if (s.bond < 0 || s.bond >= num_bonds() || has_db[s.bond])
      continue;
    const Bond &bond = bonds_[s.bond];
    if (bond.order != BondOrder::kDouble || bond_in_ring_[s.bond])
      continue;
    if (s.ref_begin == bond.end || s.ref_end == bond.begin
        || find_bond(bond.begin, s.ref_begin) < 0
        || find_bond(bond.end, s.ref_end) < 0)
      continue;
    has_db[s.bond] = true;
    double_bonds_.push_back(s);
  }
  std::sort(double_bonds_.begin(), double_bonds_.end(),
            [](const auto &a, const auto &b) { return a.bond < b.bond; });
}

int Molecule::find_bond(int a, int b) const {
  if (a < 0 || a >= num_atoms() || b < 0 || b >= num_atoms())
    return -1;
  for (const Neighbor &nb: neighbors(a)) {
    if (nb.atom == b)
      return nb.bond;
  }
  return -1;
}

int Molecule::heavy_atom_count() const {
  return static_cast<int>(std::count_if(
      atoms_.begin(), atoms_.end(), [](const Atom &a) { return a.element != 1; }));
}

const TetrahedralCenter *Molecule::tetrahedral_center(int atom) const {
  auto it = std::lower_bound(
      centers_.begin(), centers_.end(), atom,
      [](const TetrahedralCenter &c, int a) { return c.atom < a; });
  return it != centers_.end() && it->atom == atom ? &*it : nullptr;
}

Molecule relabel_atoms(const Molecule &mol, std::span<const int> new_index) {
  const int n = mol.num_atoms();
  if (static_cast<int>(new_index.size()) != n)
    throw MoleculeError("relabel: permutation size mismatch");
  std::vector<Atom> atoms(n);
  std::vector<bool> used(n, false);
  for (int i = 0; i < n; ++i) {
    const int j = new_index[i];
    if (j < 0 || j >= n || used[j])
      throw MoleculeError("relabel: not a permutation");
    used[j] = true;
    atoms[j] = mol.atom(i);
  }
  auto map = [&](int a) { return a == kImplicitNeighbor ? a : new_index[a]; };

  std::vector<Bond> bonds(mol.bonds().begin(), mol.bonds().end());
  for (Bond &b: bonds) {
    b.begin = new_index[b.begin];
    b.end = new_index[b.end];
  }
  std::vector<TetrahedralCenter> centers;
  for (TetrahedralCenter c: mol.tetrahedral_centers()) {
    c.atom = new_index[c.atom];
    for (int &r: c.neighbors)
      r = map(r);
    centers.push_back(c);
  }
  std::vector<DoubleBondStereo> dbs;
  for (DoubleBondStereo s: mol.double_bond_stereo()) {
    s.ref_begin = new_index[s.ref_begin];
    s.ref_end = new_index[s.ref_end];
    dbs.push_back(s);
  }
  return Molecule(std::move(atoms), std::move(bonds), std::move(centers),
                  std::move(dbs));
}

Molecule reorder_bonds(const Molecule &mol, std::span<const int> new_index,
                       std::span<const bool> swap_ends) {
  const int m = mol.num_bonds();
  if (static_cast<int>(new_index.size()) != m
      || static_cast<int>(swap_ends.size()) != m)
    throw MoleculeError("reorder_bonds: size mismatch");
  std::vector<Bond> bonds(m);
  std::vector<bool> used(m, false);
  for (int i = 0; i < m; ++i) {
    const int j = new_index[i];
    if (j < 0 || j >= m || used[j])
      throw MoleculeError("reorder_bonds: not a permutation");
    used[j] = true;
    Bond b = mol.bond(i);
    if (swap_ends[i]) {
      std::swap(b.begin, b.end);
      if (b.direction == BondDirection::kUp)
        b.direction = BondDirection::kDown;
      else if (b.direction == BondDirection::kDown)
        b.direction = BondDirection::kUp;
    }
    bonds[j] = b;
  }
  std::vector<TetrahedralCenter> centers(mol.tetrahedral_centers().begin(),
                                         mol.tetrahedral_centers().end());
  std::vector<DoubleBondStereo> dbs;
  for (DoubleBondStereo s: mol.double_bond_stereo()) {
    if (swap_ends[s.bond])
      std::swap(s.ref_begin, s.ref_end);
    s.bond = new_index[s.bond];
    dbs.push_back(s);
  }
  return Molecule(std::vector<Atom>(mol.atoms().begin(), mol.atoms().end()),
                  std::move(bonds), std::move(centers), std::move(dbs));
}

Molecule strip_stereo(const Molecule &mol) {
  std::vector<Atom> atoms(mol.atoms().begin(), mol.atoms().end());
  for (Atom &a: atoms)
    a.chirality = Chirality::kNone;
  std::vector<Bond> bonds(mol.bonds().begin(), mol.bonds().end());
  for (Bond &b: bonds)
    b.direction = BondDirection::kNone;
  return Molecule(std::move(atoms), std::move(bonds));
}

Molecule induced_submolecule(const Molecule &mol, std::span<const int> atoms) {
  std::vector<int> index(mol.num_atoms(), -1);
  std::vector<Atom> sub_atoms;
  for (int a: atoms) {
    if (index[a] >= 0)
      throw MoleculeError("induced_submolecule: repeated atom");
    index[a] = static_cast<int>(sub_atoms.size());
    sub_atoms.push_back(mol.atom(a));
  }
  std::vector<Bond> bonds;
  std::vector<int> bond_index(mol.num_bonds(), -1);
  for (int b = 0; b < mol.num_bonds(); ++b) {
    Bond bond = mol.bond(b);
    if (index[bond.begin] < 0 || index[bond.end] < 0)
      continue;
    bond.begin = index[bond.begin];
    bond.end = index[bond.end];
    bond_index[b] = static_cast<int>(bonds.size());
    bonds.push_back(bond);
  }
  std::vector<TetrahedralCenter> centers;
  for (TetrahedralCenter c: mol.tetrahedral_centers()) {
    if (index[c.atom] < 0)
      continue;
    bool inside = true;
    for (int &r: c.neighbors) {
      if (r == kImplicitNeighbor)
        continue;
      if (index[r] < 0)
        inside = false;
      else
        r = index[r];
    }
    if (inside) {
      c.atom = index[c.atom];
      centers.push_back(c);
    }
  }
  std::vector<DoubleBondStereo> dbs;
  for (DoubleBondStereo s: mol.double_bond_stereo()) {
    if (bond_index[s.bond] < 0 || index[s.ref_begin] < 0
        || index[s.ref_end] < 0)
      continue;
    dbs.push_back({ bond_index[s.bond], index[s.ref_begin], index[s.ref_end],
                    s.cis });
  }
  return Molecule(std::move(sub_atoms), std::move(bonds), std::move(centers),
                  std::move(dbs));
}

double molecular_weight(const Molecule &mol) {
  // Summed per (element, isotope) in a fixed order so the result does not
  // depend on atom order down to the last bit.
  std::map<std::pair<int, int>, int> counts;
  int hydrogens = 0;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &a = mol.atom(i);
    ++counts[{ a.element, a.isotope.value_or(0) }];
    hydrogens += mol.hydrogen_count(i);
  }
  if (hydrogens > 0)
    counts[{ 1, 0 }] += hydrogens;
  double total = 0.0;
  for (const auto &[key, count]: counts) {
    const double weight = key.second > 0 ? static_cast<double>(key.second)
                                         : element(key.first).atomic_weight;
    total += weight * count;
  }
  return total;
}

}  // namespace retrochem
