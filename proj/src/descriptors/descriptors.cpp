//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/descriptors/descriptors.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <queue>
#include <utility>

#include "retrochem/smiles/canonical.h"
#include "retrochem/smiles/element.h"

namespace retrochem {
namespace {

using BondSet = std::vector<std::uint64_t>;

int heavy_degree(const Molecule &mol, int atom) {
  int d = 0;
  for (const Neighbor &nb: mol.neighbors(atom))
    d += mol.atom(nb.atom).element != 1;
  return d;
}

std::vector<int> heavy_atoms(const Molecule &mol) {
  std::vector<int> atoms;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    if (mol.atom(i).element != 1)
      atoms.push_back(i);
  }
  return atoms;
}

Molecule heavy_skeleton(const Molecule &mol) {
  const std::vector<int> atoms = heavy_atoms(mol);
  if (static_cast<int>(atoms.size()) == mol.num_atoms())
    return mol;
  return induced_submolecule(mol, atoms);
}

bool is_amide_cn(const Molecule &mol, const Bond &bond) {
  auto carbonyl_carbon = [&](int c) {
    if (mol.atom(c).element != 6)
      return false;
    for (const Neighbor &nb: mol.neighbors(c)) {
      if (mol.atom(nb.atom).element == 8
          && mol.bond(nb.bond).order == BondOrder::kDouble)
        return true;
    }
    return false;
  };
  const int a = bond.begin;
  const int b = bond.end;
  return (mol.atom(b).element == 7 && carbonyl_carbon(a))
         || (mol.atom(a).element == 7 && carbonyl_carbon(b));
}

int count_atoms(const Molecule &mol, int element_number) {
  int n = 0;
  for (const Atom &a: mol.atoms())
    n += a.element == element_number;
  return n;
}

int total_hydrogens(const Molecule &mol) {
  int h = 0;
  for (int i = 0; i < mol.num_atoms(); ++i)
    h += mol.hydrogen_count(i) + (mol.atom(i).element == 1);
  return h;
}

// Reduce to the largest fragment when disconnected.
const Molecule *connected_view(const Molecule &mol, Molecule &storage) {
  if (mol.num_components() <= 1)
    return &mol;
  const std::vector<Molecule> parts = split_fragments(mol);
  storage = parts[largest_fragment_index(parts)];
  return &storage;
}

double wiener_index(const Molecule &input) {
  Molecule storage;
  const Molecule heavy = heavy_skeleton(input);
  const Molecule &mol = *connected_view(heavy, storage);
  const auto d = distance_matrix(mol);
  double sum = 0;
  for (int i = 0; i < mol.num_atoms(); ++i)
    for (int j = i + 1; j < mol.num_atoms(); ++j)
      sum += d[i][j];
  return sum;
}

double zagreb_m1(const Molecule &input) {
  const Molecule mol = heavy_skeleton(input);
  double sum = 0;
  for (int i = 0; i < mol.num_atoms(); ++i)
    sum += mol.degree(i) * mol.degree(i);
  return sum;
}

double zagreb_m2(const Molecule &input) {
  const Molecule mol = heavy_skeleton(input);
  double sum = 0;
  for (const Bond &b: mol.bonds())
    sum += mol.degree(b.begin) * mol.degree(b.end);
  return sum;
}

double randic_index(const Molecule &input) {
  const Molecule mol = heavy_skeleton(input);
  double sum = 0;
  for (const Bond &b: mol.bonds())
    sum += 1.0 / std::sqrt(double(mol.degree(b.begin) * mol.degree(b.end)));
  return sum;
}

double fraction_csp3(const Molecule &mol) {
  int carbons = 0;
  int sp3 = 0;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    if (mol.atom(i).element != 6)
      continue;
    ++carbons;
    bool saturated = !mol.atom(i).aromatic;
    for (const Neighbor &nb: mol.neighbors(i))
      saturated &= mol.bond(nb.bond).order == BondOrder::kSingle;
    sp3 += saturated;
  }
  return carbons == 0 ? 0.0 : double(sp3) / carbons;
}

int ring_size_extreme(const Molecule &mol, bool largest) {
  const auto rings = minimum_cycle_basis(mol);
  int best = 0;
  for (const auto &r: rings) {
    const int size = static_cast<int>(r.size());
    if (best == 0 || (largest ? size > best : size < best))
      best = size;
  }
  return best;
}

int count_bonds(const Molecule &mol, BondOrder order) {
  int n = 0;
  for (const Bond &b: mol.bonds())
    n += b.order == order;
  return n;
}

}  // namespace

std::vector<std::vector<int>> distance_matrix(const Molecule &mol) {
  const int n = mol.num_atoms();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, -1));
  std::queue<int> q;
  for (int s = 0; s < n; ++s) {
    d[s][s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const Neighbor &nb: mol.neighbors(v)) {
        if (d[s][nb.atom] < 0) {
          d[s][nb.atom] = d[s][v] + 1;
          q.push(nb.atom);
        }
      }
    }
  }
  return d;
}

int valence_electron_count(const Molecule &mol) {
  int total = 0;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &a = mol.atom(i);
    total += element(a.element).valence_electrons + mol.hydrogen_count(i)
             - a.charge;
  }
  return total;
}

int nhoh_count(const Molecule &mol) {
  int total = 0;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const int e = mol.atom(i).element;
    if (e != 7 && e != 8)
      continue;
    total += mol.hydrogen_count(i);
    for (const Neighbor &nb: mol.neighbors(i))
      total += mol.atom(nb.atom).element == 1;
  }
  return total;
}

int no_count(const Molecule &mol) {
  return count_atoms(mol, 7) + count_atoms(mol, 8);
}

int halogen_count(const Molecule &mol) {
  int n = 0;
  for (const Atom &a: mol.atoms())
    n += is_halogen(a.element);
  return n;
}

int rotatable_bond_count(const Molecule &mol) {
  int n = 0;
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    if (bond.order != BondOrder::kSingle || mol.bond_in_ring(b))
      continue;
    if (mol.atom(bond.begin).element == 1 || mol.atom(bond.end).element == 1)
      continue;
    if (heavy_degree(mol, bond.begin) < 2 || heavy_degree(mol, bond.end) < 2)
      continue;
    if (is_amide_cn(mol, bond))
      continue;
    ++n;
  }
  return n;
}

std::vector<std::vector<int>> minimum_cycle_basis(const Molecule &mol) {
  const int n = mol.num_atoms();
  const int m = mol.num_bonds();
  const int rank = mol.cycle_rank();
  if (rank <= 0)
    return {};
  const std::size_t words = (m + 63) / 64;

  struct Candidate {
    BondSet bits;
    int size;
    bool aromatic;
  };
  std::vector<Candidate> candidates;
  std::vector<int> dist(n), parent_bond(n), branch(n);
  for (int root = 0; root < n; ++root) {
    if (!mol.in_ring(root))
      continue;
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent_bond.begin(), parent_bond.end(), -1);
    std::queue<int> q;
    dist[root] = 0;
    branch[root] = -1;
    q.push(root);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const Neighbor &nb: mol.neighbors(v)) {
        if (dist[nb.atom] >= 0)
          continue;
        dist[nb.atom] = dist[v] + 1;
        parent_bond[nb.atom] = nb.bond;
        branch[nb.atom] = v == root ? nb.atom : branch[v];
        q.push(nb.atom);
      }
    }
    for (int b = 0; b < m; ++b) {
      if (!mol.bond_in_ring(b))
        continue;
      const int x = mol.bond(b).begin;
      const int y = mol.bond(b).end;
      if (dist[x] < 0 || parent_bond[x] == b || parent_bond[y] == b)
        continue;
      if (x != root && y != root && branch[x] == branch[y])
        continue;
      Candidate c { BondSet(words, 0), 1, true };
      c.bits[b / 64] |= std::uint64_t { 1 } << (b % 64);
      c.aromatic = mol.bond(b).order == BondOrder::kAromatic;
      for (int v: { x, y }) {
        while (v != root) {
          const int pb = parent_bond[v];
          c.bits[pb / 64] |= std::uint64_t { 1 } << (pb % 64);
          c.aromatic &= mol.bond(pb).order == BondOrder::kAromatic;
          ++c.size;
          v = mol.bond(pb).other(v);
        }
      }
      candidates.push_back(std::move(c));
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &a, const Candidate &b) {
              if (a.size != b.size)
                return a.size < b.size;
              if (a.aromatic != b.aromatic)
                return a.aromatic;
              return a.bits < b.bits;
            });

  // Gaussian elimination over GF(2), basis kept with distinct pivots.
  std::vector<BondSet> basis;
  std::vector<int> pivots;
  std::vector<std::vector<int>> rings;
  auto lowest_bit = [&](const BondSet &s) {
    for (std::size_t w = 0; w < words; ++w) {
      if (s[w] != 0)
        return static_cast<int>(w * 64 + __builtin_ctzll(s[w]));
    }
    return -1;
  };
  for (const Candidate &c: candidates) {
    if (static_cast<int>(rings.size()) == rank)
      break;
    BondSet reduced = c.bits;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const int p = pivots[k];
      if (reduced[p / 64] >> (p % 64) & 1) {
        for (std::size_t w = 0; w < words; ++w)
          reduced[w] ^= basis[k][w];
      }
    }
    const int pivot = lowest_bit(reduced);
    if (pivot < 0)
      continue;
    // Keep pivots unique: clear this pivot from existing rows.
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (basis[k][pivot / 64] >> (pivot % 64) & 1) {
        for (std::size_t w = 0; w < words; ++w)
          basis[k][w] ^= reduced[w];
      }
    }
    basis.push_back(std::move(reduced));
    pivots.push_back(pivot);
    std::vector<int> ring;
    for (int b = 0; b < m; ++b) {
      if (c.bits[b / 64] >> (b % 64) & 1)
        ring.push_back(b);
    }
    rings.push_back(std::move(ring));
  }
  return rings;
}

int aromatic_ring_count(const Molecule &mol) {
  int n = 0;
  for (const auto &ring: minimum_cycle_basis(mol)) {
    n += std::all_of(ring.begin(), ring.end(), [&](int b) {
      return mol.bond(b).order == BondOrder::kAromatic;
    });
  }
  return n;
}

BalabanResult balaban_j(const Molecule &input) {
  BalabanResult result;
  Molecule storage;
  const Molecule heavy = heavy_skeleton(input);
  const Molecule &mol = *connected_view(heavy, storage);
  result.largest_fragment_only = heavy.num_components() > 1;
  const int q = mol.num_bonds();
  if (q == 0)
    return result;
  const int mu = mol.cycle_rank();
  const auto d = distance_matrix(mol);
  std::vector<double> s(mol.num_atoms(), 0.0);
  for (int i = 0; i < mol.num_atoms(); ++i) {
    for (int j = 0; j < mol.num_atoms(); ++j)
      s[i] += d[i][j];
  }
  double sum = 0.0;
  for (const Bond &b: mol.bonds())
    sum += 1.0 / std::sqrt(s[b.begin] * s[b.end]);
  result.value = double(q) / (mu + 1) * sum;
  return result;
}

const DescriptorRegistry &DescriptorRegistry::builtin() {
  static const DescriptorRegistry kRegistry = [] {
    DescriptorRegistry r;
    auto count = [&](std::string id, std::string name,
                     std::function<double(const Molecule &)> fn) {
      r.add({ std::move(id), std::move(name), "", std::move(fn), true, "" });
    };
    r.add({ "molecular_weight", "molecular weight", "g/mol",
            [](const Molecule &m) { return molecular_weight(m); }, false,
            "" });
    count("heavy_atom_count", "number of heavy atoms",
          [](const Molecule &m) { return m.heavy_atom_count(); });
    count("valence_electrons", "valence electron count",
          [](const Molecule &m) { return valence_electron_count(m); });
    count("nhoh_count", "number of NHs or OHs",
          [](const Molecule &m) { return nhoh_count(m); });
    count("no_count", "number of nitrogen and oxygen atoms",
          [](const Molecule &m) { return no_count(m); });
    count("ring_count", "number of rings",
          [](const Molecule &m) { return m.cycle_rank(); });
    count("rotatable_bonds", "number of rotatable bonds",
          [](const Molecule &m) { return rotatable_bond_count(m); });
    count("halogen_count", "number of halogen atoms",
          [](const Molecule &m) { return halogen_count(m); });
    count("aromatic_ring_count", "number of aromatic rings",
          [](const Molecule &m) { return aromatic_ring_count(m); });
    r.add({ "balaban_j", "Balaban J value", "",
            [](const Molecule &m) { return balaban_j(m).value; }, false,
            "largest fragment when disconnected" });

    count("formal_charge", "net formal charge", [](const Molecule &m) {
      int c = 0;
      for (const Atom &a: m.atoms())
        c += a.charge;
      return c;
    });
    count("hetero_atom_count", "number of heteroatoms",
          [](const Molecule &m) {
            int n = 0;
            for (const Atom &a: m.atoms())
              n += a.element != 1 && a.element != 6;
            return n;
          });
    count("hydrogen_count", "number of hydrogen atoms",
          [](const Molecule &m) { return total_hydrogens(m); });
    count("atom_count", "number of atoms including hydrogens",
          [](const Molecule &m) {
            return m.heavy_atom_count() + total_hydrogens(m);
          });
    count("carbon_count", "number of carbon atoms",
          [](const Molecule &m) { return count_atoms(m, 6); });
    count("nitrogen_count", "number of nitrogen atoms",
          [](const Molecule &m) { return count_atoms(m, 7); });
    count("oxygen_count", "number of oxygen atoms",
          [](const Molecule &m) { return count_atoms(m, 8); });
    count("sulfur_count", "number of sulfur atoms",
          [](const Molecule &m) { return count_atoms(m, 16); });
    count("aromatic_atom_count", "number of aromatic atoms",
          [](const Molecule &m) {
            int n = 0;
            for (const Atom &a: m.atoms())
              n += a.aromatic;
            return n;
          });
    count("ring_atom_count", "number of ring atoms", [](const Molecule &m) {
      int n = 0;
      for (int i = 0; i < m.num_atoms(); ++i)
        n += m.in_ring(i);
      return n;
    });
    count("double_bond_count", "number of double bonds",
          [](const Molecule &m) {
            return count_bonds(m, BondOrder::kDouble);
          });
    count("triple_bond_count", "number of triple bonds",
          [](const Molecule &m) {
            return count_bonds(m, BondOrder::kTriple);
          });
    count("stereocenter_count", "number of tagged stereocenters",
          [](const Molecule &m) {
            return static_cast<int>(m.tetrahedral_centers().size());
          });
    count("fragment_count", "number of fragments",
          [](const Molecule &m) { return m.num_components(); });
    count("largest_ring_size", "largest ring size",
          [](const Molecule &m) { return ring_size_extreme(m, true); });
    count("smallest_ring_size", "smallest ring size",
          [](const Molecule &m) { return ring_size_extreme(m, false); });
    r.add({ "fraction_csp3", "fraction of sp3 carbons", "", fraction_csp3,
            false, "" });
    r.add({ "wiener_index", "Wiener index", "", wiener_index, true,
            "largest fragment when disconnected" });
    r.add({ "zagreb_m1", "first Zagreb index", "", zagreb_m1, true, "" });
    r.add({ "zagreb_m2", "second Zagreb index", "", zagreb_m2, true, "" });
    r.add({ "randic_index", "Randic connectivity index", "", randic_index,
            false, "" });
    return r;
  }();
  return kRegistry;
}

void DescriptorRegistry::add(Descriptor descriptor) {
  if (descriptor.id.empty())
    throw DescriptorError("descriptor id must not be empty");
  if (!descriptor.compute)
    throw DescriptorError("descriptor " + descriptor.id
                          + " has no compute function");
  const std::string id = descriptor.id;
  if (!entries_.emplace(id, std::move(descriptor)).second)
    throw DescriptorError("descriptor already registered: " + id);
}

bool DescriptorRegistry::contains(std::string_view id) const {
  return entries_.find(id) != entries_.end();
}

const Descriptor &DescriptorRegistry::get(std::string_view id) const {
  auto it = entries_.find(id);
  if (it == entries_.end())
    throw DescriptorError("unknown descriptor: " + std::string(id));
  return it->second;
}

double DescriptorRegistry::compute(const Molecule &mol,
                                   std::string_view id) const {
  return get(id).compute(mol);
}

std::vector<const Descriptor *> DescriptorRegistry::list() const {
  std::vector<const Descriptor *> out;
  for (const auto &[id, d]: entries_)
    out.push_back(&d);
  return out;
}

std::string DescriptorRegistry::export_table() const {
  std::string out = "# retrochem descriptor registry v1\n"
                    "# id\tname\tunit\n";
  for (const auto &[id, d]: entries_)
    out += d.id + '\t' + d.name + '\t' + d.unit + '\n';
  return out;
}

std::string format_descriptor_value(const Descriptor &descriptor,
                                    double value) {
  char buf[64];
  if (descriptor.integer)
    std::snprintf(buf, sizeof buf, "%lld", std::llround(value));
  else
    std::snprintf(buf, sizeof buf, "%.3f", value);
  return buf;
}

}  // namespace retrochem
