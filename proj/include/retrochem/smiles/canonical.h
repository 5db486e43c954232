//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_SMILES_CANONICAL_H_
#define RETROCHEM_SMILES_CANONICAL_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "retrochem/smiles/molecule.h"

namespace retrochem {

class CanonicalizeError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct CanonicalOptions {
  // Emit @/@@ and / \ markers. Off gives the stereo-agnostic projection.
  bool stereo = true;
  // Run check_validity first and throw on failure. Substructure fragments
  // (e.g. for fingerprints) switch this off.
  bool require_valid = true;
};

// Unique string for the molecular graph. Components are canonicalized
// separately and joined with '.' in sorted order.
//
// Atoms are ranked by iterated neighborhood refinement. Remaining ties are
// broken by individualizing each member of the lowest tied class in turn
// and recursing; the lexicographically smallest resulting string wins, so
// the output does not depend on input order even when stereo markers sit
// on symmetry-equivalent atoms. Interchangeable terminal atoms are pruned.
// Past kCanonicalLeafBudget leaves the search falls back to the first
// member of each tied class.
std::string canonicalize(const Molecule &mol,
                         const CanonicalOptions &options = {});

// Parses then canonicalizes.
std::string canonical_smiles(std::string_view smiles,
                             const CanonicalOptions &options = {});

inline constexpr int kCanonicalLeafBudget = 4096;

// Writes a connected or disconnected molecule using `priority` (one
// distinct value per atom; lower is visited first). Components are
// written in order of their lowest-priority atom.
std::string write_smiles(const Molecule &mol, std::span<const int> priority,
                         bool stereo = true);

// A valid but arbitrary SMILES for the molecule: random traversal order and
// random fragment order.
std::string random_smiles(const Molecule &mol, std::uint64_t seed,
                          bool stereo = true);

// One molecule per connected component, in order of first atom.
std::vector<Molecule> split_fragments(const Molecule &mol);
std::vector<Molecule> split_fragments(std::string_view smiles);

// Index of the fragment with the most heavy atoms, then the highest
// molecular weight, then the lexicographically greatest canonical SMILES.
// Throws std::invalid_argument on an empty list.
std::size_t largest_fragment_index(std::span<const Molecule> mols);
const Molecule &largest_fragment(std::span<const Molecule> mols);

}  // namespace retrochem

#endif  // RETROCHEM_SMILES_CANONICAL_H_
