//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_DESCRIPTORS_DESCRIPTORS_H_
#define RETROCHEM_DESCRIPTORS_DESCRIPTORS_H_

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "retrochem/smiles/molecule.h"

namespace retrochem {

class DescriptorError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Descriptor {
  std::string id;
  std::string name;
  std::string unit;  // empty for dimensionless counts
  std::function<double(const Molecule &)> compute;
  bool integer = false;
  // Non-empty when the value is only defined on part of the input, e.g.
  // connected graphs.
  std::string domain;
};

class DescriptorRegistry {
public:
  DescriptorRegistry() = default;

  // Registry holding every built-in descriptor.
  static const DescriptorRegistry &builtin();

  // Throws DescriptorError when the id is already taken.
  void add(Descriptor descriptor);

  bool contains(std::string_view id) const;
  const Descriptor &get(std::string_view id) const;
  double compute(const Molecule &mol, std::string_view id) const;

  // Sorted by identifier.
  std::vector<const Descriptor *> list() const;
  std::size_t size() const { return entries_.size(); }

  // "id<TAB>name<TAB>unit" per line after a versioned header.
  std::string export_table() const;

private:
  std::map<std::string, Descriptor, std::less<>> entries_;
};

// Formats a value for prompts: integers without a decimal point, reals with
// three decimals.
std::string format_descriptor_value(const Descriptor &descriptor,
                                    double value);

int valence_electron_count(const Molecule &mol);
int nhoh_count(const Molecule &mol);
int no_count(const Molecule &mol);
int halogen_count(const Molecule &mol);
int rotatable_bond_count(const Molecule &mol);

// Minimum cycle basis (Horton candidates, greedy GF(2) elimination). Each
// ring is returned as a list of bond indices. Among rings of equal size,
// fully aromatic ones are preferred so counts are order independent.
std::vector<std::vector<int>> minimum_cycle_basis(const Molecule &mol);
int aromatic_ring_count(const Molecule &mol);

struct BalabanResult {
  double value = 0.0;
  // Set when the input was disconnected and only the largest fragment was
  // used.
  bool largest_fragment_only = false;
};

// J = q / (mu + 1) * sum over bonds of (s_i * s_j)^(-1/2), with s the row
// sums of the topological distance matrix over heavy atoms.
BalabanResult balaban_j(const Molecule &mol);

// All-pairs topological distances (BFS); -1 between components.
std::vector<std::vector<int>> distance_matrix(const Molecule &mol);

}  // namespace retrochem

#endif  // RETROCHEM_DESCRIPTORS_DESCRIPTORS_H_
