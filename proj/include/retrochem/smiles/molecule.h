//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_SMILES_MOLECULE_H_
#define RETROCHEM_SMILES_MOLECULE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace retrochem {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// '/' is kUp and '\' is kDown, read from Bond::begin towards Bond::end.
enum class BondDirection : std::uint8_t {
  kNone,
  kUp,
  kDown,
};

// SMILES '@' is kCounterClockwise and '@@' is kClockwise: looking from the
// first reference neighbor, the remaining three are arranged in that sense.
enum class Chirality : std::uint8_t {
  kNone,
  kClockwise,
  kCounterClockwise,
};

inline Chirality flip(Chirality c) {
  switch (c) {
  case Chirality::kClockwise:
    return Chirality::kCounterClockwise;
  case Chirality::kCounterClockwise:
    return Chirality::kClockwise;
  default:
    return c;
  }
}

struct Atom {
  int element = 6;
  int charge = 0;
  std::optional<int> isotope;
  // Present iff the atom was written in brackets; binding in that case.
  std::optional<int> explicit_hydrogens;
  bool aromatic = false;
  Chirality chirality = Chirality::kNone;
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;
  BondDirection direction = BondDirection::kNone;

  int other(int atom) const { return atom == begin ? end : begin; }
};

// Marks the implicit hydrogen (or lone pair) slot in a stereo neighbor list.
inline constexpr int kImplicitNeighbor = -1;

struct TetrahedralCenter {
  int atom = 0;
  std::array<int, 4> neighbors {};
};

// Cis/trans relation between one substituent on each end of a double bond.
struct DoubleBondStereo {
  int bond = 0;
  int ref_begin = 0;  // neighbor of bond.begin
  int ref_end = 0;    // neighbor of bond.end
  bool cis = false;
};

struct Neighbor {
  int atom;
  int bond;
};

class MoleculeError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Immutable molecular graph. Hydrogen counts, ring membership and
// connected components are derived once at construction.
class Molecule {
public:
  Molecule() = default;

  // Throws MoleculeError when the graph is not simple (self loops,
  // duplicate bonds, dangling indices) or an atom field is out of range.
  // Chirality tags without a matching TetrahedralCenter are dropped, and
  // vice versa.
  Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds,
           std::vector<TetrahedralCenter> centers = {},
           std::vector<DoubleBondStereo> double_bonds = {});

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  bool empty() const { return atoms_.empty(); }

  const Atom &atom(int i) const { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }

  std::span<const Neighbor> neighbors(int atom) const {
    return { adjacency_.data() + adj_offset_[atom],
             adjacency_.data() + adj_offset_[atom + 1] };
  }
  int degree(int atom) const {
    return adj_offset_[atom + 1] - adj_offset_[atom];
  }

  // Returns -1 when the atoms are not bonded.
  int find_bond(int a, int b) const;

  int hydrogen_count(int atom) const { return hydrogens_[atom]; }
  int heavy_atom_count() const;

  bool in_ring(int atom) const { return atom_in_ring_[atom]; }
  bool bond_in_ring(int bond) const { return bond_in_ring_[bond]; }
  const std::vector<bool> &ring_membership() const { return atom_in_ring_; }

  int num_components() const { return num_components_; }
  int component(int atom) const { return component_[atom]; }

  // Cyclomatic number: bonds - atoms + components.
  int cycle_rank() const {
    return num_bonds() - num_atoms() + num_components_;
  }

  std::span<const TetrahedralCenter> tetrahedral_centers() const {
    return centers_;
  }
  const TetrahedralCenter *tetrahedral_center(int atom) const;
  std::span<const DoubleBondStereo> double_bond_stereo() const {
    return double_bonds_;
  }
  bool has_stereo() const {
    return !centers_.empty() || !double_bonds_.empty();
  }

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<TetrahedralCenter> centers_;
  std::vector<DoubleBondStereo> double_bonds_;

  std::vector<Neighbor> adjacency_;
  std::vector<int> adj_offset_ { 0 };
  std::vector<int> hydrogens_;
  std::vector<bool> atom_in_ring_;
  std::vector<bool> bond_in_ring_;
  std::vector<int> component_;
  int num_components_ = 0;
};

// Normal valences used to infer implicit hydrogens on organic-subset atoms
// written without brackets (B C N O P S F Cl Br I). Empty for other
// elements.
std::span<const int> organic_valences(int element);
bool is_organic_subset(int element);
bool aromatic_capable(int element);

// Implicit hydrogens an unbracketed neutral atom would carry given its
// current bonds. Aromatic bonds count one; an aromatic atom reserves one
// more unit for its pi bond when its valence allows.
int default_implicit_hydrogens(const Molecule &mol, int atom);

// Sum of bond orders with aromatic bonds counted as 1.
int bond_order_sum(const Molecule &mol, int atom);

// new_index[i] is the position of atom i in the result. Bond order is
// preserved; stereo references are remapped.
Molecule relabel_atoms(const Molecule &mol, std::span<const int> new_index);

// Same graph with bond list order and bond begin/end orientation changed;
// bond directions are flipped along with swapped endpoints.
Molecule reorder_bonds(const Molecule &mol, std::span<const int> new_index,
                       std::span<const bool> swap_ends);

// Drops tetrahedral and cis/trans markers (the stereo-agnostic projection).
Molecule strip_stereo(const Molecule &mol);

// Induced subgraph over `atoms` (in the given order). Stereo entries whose
// references fall outside the subgraph are dropped.
Molecule induced_submolecule(const Molecule &mol, std::span<const int> atoms);

double molecular_weight(const Molecule &mol);

}  // namespace retrochem

#endif  // RETROCHEM_SMILES_MOLECULE_H_
