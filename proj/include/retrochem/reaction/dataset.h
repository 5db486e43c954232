//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_REACTION_DATASET_H_
#define RETROCHEM_REACTION_DATASET_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "retrochem/reaction/reaction.h"

namespace retrochem {

class ManifestError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Unreadable dataset file or a header lacking mapped columns.
class DatasetError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class DatasetFormat {
  kCsv,
  kJsonl,
};

// Column (CSV) or field (JSONL) names. Either `reaction` names a single
// "R>C>P" column, or `reactants` and `products` (plus optional
// `conditions`) name separate ones. JSONL fields may hold a dot-joined
// string or an array of strings.
struct DatasetSchema {
  std::string reaction;
  std::string reactants;
  std::string conditions;
  std::string products;
  std::string id;
  std::string yield;
};

// Manifest file (TOML):
//
//   name = "ELN BH"
//   aliases = ["eln"]
//   path = "eln_bh.csv"        # relative to the manifest
//   format = "csv"             # or "jsonl"
//   count = 750                # optional expected record count
//   [columns]
//   reactants = "reactants"
//   conditions = "reagents"
//   products = "product"
//   id = "rxn_id"
//   yield = "yield"
struct DatasetManifest {
  std::string name;
  std::vector<std::string> aliases;
  std::filesystem::path path;
  DatasetFormat format = DatasetFormat::kCsv;
  DatasetSchema schema;
  std::optional<std::size_t> count;

  bool matches(std::string_view label) const;

  static DatasetManifest parse(std::string_view text,
                               const std::filesystem::path &base_dir);
  static DatasetManifest load(const std::filesystem::path &path);
};

struct IngestResult {
  std::vector<ReactionRecord> records;
  std::vector<std::string> warnings;
  std::size_t rows = 0;
  std::size_t skipped = 0;
};

// One record per row. Rows that fail to parse or contain an invalid
// molecule are skipped with a row-numbered warning; yields outside
// [0, 100] are clamped with a warning. A count mismatch against the
// manifest is reported as a warning too.
IngestResult ingest_dataset(const DatasetManifest &manifest);

// JSON-lines form: {"id", "source", "reactants": [..], "conditions": [..],
// "products": [..], "yield"}. Yield is null when absent.
std::string serialize_record(const ReactionRecord &rec);
ReactionRecord parse_record_json(std::string_view line);

void write_records(std::ostream &out, std::span<const ReactionRecord> recs);

// Reads the JSON-lines form, skipping malformed or invalid rows with
// warnings.
IngestResult read_records(const std::filesystem::path &path);

}  // namespace retrochem

#endif  // RETROCHEM_REACTION_DATASET_H_
