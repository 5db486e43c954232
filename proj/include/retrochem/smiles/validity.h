//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_SMILES_VALIDITY_H_
#define RETROCHEM_SMILES_VALIDITY_H_

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "retrochem/smiles/molecule.h"

namespace retrochem {

enum class ChargeRule {
  kPlus,   // valence + charge
  kMinus,  // valence - charge
  kAbs,    // valence - |charge|
};

// Element -> allowed valences, with a per-element charge adjustment. The
// shipped default lives in data/valence.conf and is compiled in.
class ValenceTable {
public:
  struct Entry {
    std::vector<int> valences;
    ChargeRule rule = ChargeRule::kPlus;
  };

  static const ValenceTable &default_table();
  static ValenceTable parse(std::string_view text);
  static ValenceTable load(const std::filesystem::path &path);

  // Adjusted valences in ascending order; empty when the element is
  // unchecked.
  std::vector<int> allowed(int element, int charge) const;
  std::optional<int> max_valence(int element, int charge) const;
  bool checks(int element) const { return entries_.count(element) > 0; }

private:
  std::map<int, Entry> entries_;
};

class ValenceTableError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class KekulizeError: public std::runtime_error {
public:
  enum class Kind {
    kAcyclicAromatic,
    kRingSize,
    kNoMatching,
  };

  KekulizeError(Kind kind, int atom, const std::string &message)
      : std::runtime_error(message), kind_(kind), atom_(atom) { }

  Kind kind() const { return kind_; }
  int atom() const { return atom_; }

private:
  Kind kind_;
  int atom_;
};

// Assigns alternating single/double bonds to aromatic systems via a perfect
// matching over the atoms that still need a pi bond. Aromatic flags are
// cleared on success; hydrogen counts are preserved.
Molecule kekulize(const Molecule &mol,
                  const ValenceTable &table = ValenceTable::default_table());

enum class ValidityReason {
  kValenceExceeded,
  kKekulizationFailed,
  kAromaticAcyclic,
  kParseError,
};

std::string_view to_string(ValidityReason reason);

struct ValidityFailure {
  int atom = -1;  // -1 for parse errors
  ValidityReason reason = ValidityReason::kParseError;
  std::string detail;
};

struct ValidityReport {
  bool valid = true;
  std::vector<ValidityFailure> failures;
};

// Kekulization followed by a per-atom valence check. Never throws for
// chemically illegal input; problems are listed in the report.
ValidityReport check_validity(
    const Molecule &mol,
    const ValenceTable &table = ValenceTable::default_table());

// Parses and checks; a parse failure yields a single kParseError entry.
ValidityReport validate_smiles(
    std::string_view smiles,
    const ValenceTable &table = ValenceTable::default_table());

}  // namespace retrochem

#endif  // RETROCHEM_SMILES_VALIDITY_H_
