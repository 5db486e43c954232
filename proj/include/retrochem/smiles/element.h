//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_SMILES_ELEMENT_H_
#define RETROCHEM_SMILES_ELEMENT_H_

#include <cstdint>
#include <span>
#include <string_view>

namespace retrochem {

inline constexpr int kNumElements = 118;

// Standard atomic weights, IUPAC 2021 abridged (conventional values for
// interval elements; mass number of the longest-lived isotope otherwise).
inline constexpr std::string_view kAtomicWeightsVersion = "IUPAC-2021-abridged";

struct Element {
  int atomic_number;
  std::string_view symbol;
  double atomic_weight;
  int valence_electrons;
};

// Indexed by atomic number; entry 0 is a placeholder and never returned by
// lookups.
const Element &element(int atomic_number);

// Exact, case-sensitive match. Returns 0 when the symbol is not one of the
// 118 standard symbols.
int find_element(std::string_view symbol);

std::span<const Element> all_elements();

bool is_halogen(int atomic_number);

}  // namespace retrochem

#endif  // RETROCHEM_SMILES_ELEMENT_H_
