//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_REACTION_REACTION_H_
#define RETROCHEM_REACTION_REACTION_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "retrochem/smiles/molecule.h"

namespace retrochem {

class ReactionError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// One dot-separated fragment of a reaction segment. The raw text is kept
// even when it fails to parse so validity can be scored on it.
struct Species {
  std::string smiles;
  std::optional<Molecule> mol;  // empty when parsing failed
  bool valid = false;           // parsed and passed check_validity
};

Species make_species(std::string_view smiles);

// Splits on '.', trims whitespace, drops empty pieces.
std::vector<Species> parse_species_list(std::string_view segment);

struct ReactionRecord {
  std::vector<Species> reactants;
  std::vector<Species> conditions;
  std::vector<Species> products;
  std::optional<double> yield_percent;
  std::string source;
  std::string record_id;

  bool all_valid() const;
  // "R>C>P" from the raw fragment strings in record order.
  std::string reaction_smiles() const;
};

std::string join_smiles(std::span<const Species> species);

// Accepts "R>C>P" with C possibly empty. Throws ReactionError on any other
// number of segments or an empty reactant or product segment.
ReactionRecord parse_reaction(std::string_view text);

enum class KeyMode {
  kWithConditions,
  kWithoutConditions,
};

struct ReactionKey {
  std::string key;
  KeyMode mode = KeyMode::kWithConditions;

  friend bool operator==(const ReactionKey &, const ReactionKey &) = default;
};

// Sorted canonical SMILES per segment: "reactants>conditions>products",
// with an empty middle segment in kWithoutConditions mode. Throws
// ReactionError when a molecule is invalid.
ReactionKey canonical_key(const ReactionRecord &rec, KeyMode mode,
                          bool stereo = true);

// Sorted canonical product SMILES joined by '.'.
std::string product_key(const ReactionRecord &rec, bool stereo = true);

struct OverlapResult {
  std::size_t count = 0;
  std::vector<std::string> keys;  // sorted, distinct
};

// Distinct keys of `a` that also occur in `b`. Records with invalid
// molecules are ignored.
OverlapResult overlap(std::span<const ReactionRecord> a,
                      std::span<const ReactionRecord> b, KeyMode mode,
                      bool stereo = true);

std::size_t distinct_key_count(std::span<const ReactionRecord> records,
                               KeyMode mode, bool stereo = true);

// Records grouped by product_key(); records with invalid products are left
// out.
std::map<std::string, std::vector<ReactionRecord>> group_by_product(
    std::span<const ReactionRecord> records, bool stereo = true);

}  // namespace retrochem

#endif  // RETROCHEM_REACTION_REACTION_H_
