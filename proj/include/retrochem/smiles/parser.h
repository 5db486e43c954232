//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_SMILES_PARSER_H_
#define RETROCHEM_SMILES_PARSER_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "retrochem/smiles/molecule.h"

namespace retrochem {

class SmilesError: public std::runtime_error {
public:
  SmilesError(const std::string &message, std::size_t position)
      : std::runtime_error(message + " at position "
                           + std::to_string(position)),
        position_(position) { }

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

// Accepts the organic subset (aliphatic and aromatic), bracket atoms with
// isotope, tetrahedral chirality, hydrogen count and charge, bonds - = # : /
// \, branches, ring closures (including %nn) and dot-separated fragments.
// Atom maps, wildcards, quadruple bonds and non-tetrahedral chirality
// classes are rejected.
Molecule parse_smiles(std::string_view text);

}  // namespace retrochem

#endif  // RETROCHEM_SMILES_PARSER_H_
