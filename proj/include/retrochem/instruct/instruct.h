//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_INSTRUCT_INSTRUCT_H_
#define RETROCHEM_INSTRUCT_INSTRUCT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "retrochem/descriptors/descriptors.h"
#include "retrochem/instruct/templates.h"
#include "retrochem/reaction/reaction.h"

namespace retrochem {

struct MoleculeMeta {
  std::string id;
  std::string smiles;  // may be empty
  std::optional<std::string> iupac;
  std::optional<std::string> name_en;
  std::optional<std::string> name_zh;
  std::optional<std::string> description;
  bool is_drug = false;
};

// Parses one JSON object with keys id, smiles, iupac, name_en, name_zh,
// description, is_drug. Throws std::invalid_argument when a present SMILES
// is not a valid molecule.
MoleculeMeta parse_meta_json(std::string_view line);

struct InstructionEntry {
  Task task = Task::kRetro;
  int subtask = 1;
  std::string prompt;
  std::string completion;
  std::string source_record_id;
  std::string template_id;
  std::uint64_t seed = 0;
};

// One JSON line without the trailing newline.
std::string to_json(const InstructionEntry &entry);

// n copies with reactants, conditions and products shuffled independently.
// Copy i depends only on (rec, splitmix64(seed + i)).
std::vector<ReactionRecord> augment(const ReactionRecord &rec, int n,
                                    std::uint64_t seed);

// The generators pick a template per subtask with an RNG seeded from
// `seed` and copy the seed into every entry they emit.
std::vector<InstructionEntry> gen_retro(const ReactionRecord &rec,
                                        const TemplateCatalog &catalog,
                                        std::uint64_t seed);
std::vector<InstructionEntry> gen_forward(const ReactionRecord &rec,
                                          const TemplateCatalog &catalog,
                                          std::uint64_t seed);

inline constexpr int kMaxDesignProperties = 20;

// Returns nullopt and sets *warning when the drawn subtask needs
// conditions the record does not have, or a molecule is invalid.
std::optional<InstructionEntry> gen_design(
    const ReactionRecord &rec, const TemplateCatalog &catalog,
    const DescriptorRegistry &registry, std::uint64_t seed,
    std::string *warning = nullptr);

std::vector<InstructionEntry> gen_description(const MoleculeMeta &meta,
                                              const TemplateCatalog &catalog,
                                              std::uint64_t seed);

std::optional<InstructionEntry> gen_yield(const ReactionRecord &rec,
                                          const TemplateCatalog &catalog,
                                          std::uint64_t seed);

struct CorpusOptions {
  std::uint64_t root_seed = 0;
  int augment_copies = 1;
  bool retro = true;
  bool forward = true;
  bool design = true;
  bool yield = true;
  bool description = true;
  // Probability that a record copy gets a design entry.
  double design_rate = 1.0;
  unsigned threads = 1;
};

struct Corpus {
  std::vector<InstructionEntry> entries;
  // "task/subtask" -> count
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> warnings;
};

// Record i uses seed splitmix64(root_seed + i); metadata entries continue
// the index after the last record. Output order is independent of the
// thread count.
Corpus generate_corpus(std::span<const ReactionRecord> records,
                       std::span<const MoleculeMeta> metas,
                       const TemplateCatalog &catalog,
                       const DescriptorRegistry &registry,
                       const CorpusOptions &options);

}  // namespace retrochem

#endif  // RETROCHEM_INSTRUCT_INSTRUCT_H_
