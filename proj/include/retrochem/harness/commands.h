//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_HARNESS_COMMANDS_H_
#define RETROCHEM_HARNESS_COMMANDS_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "retrochem/harness/config.h"
#include "retrochem/metrics/metrics.h"
#include "retrochem/reaction/dataset.h"

namespace retrochem {

enum ExitCode {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitEndpoint = 4,
};

// Bad input data that is not tied to a specific parser.
class DataError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Runs fn, logs any exception and maps it to an exit code.
int run_guarded(const std::function<void()> &fn);

struct LoadedDataset {
  DatasetManifest manifest;
  IngestResult ingest;
};

std::vector<LoadedDataset> load_datasets(
    const std::vector<std::filesystem::path> &manifests);

// Predictions keyed by (dataset, canonical product); an empty dataset
// name applies to every dataset. Lines are {"product", "samples"} with
// optional "dataset" and "id". Throws DataError naming the line.
using PredictionTable
    = std::map<std::pair<std::string, std::string>, std::vector<std::string>>;
PredictionTable read_predictions(const std::filesystem::path &path,
                                 StereoMode mode);

// Retro prompts for every distinct product of the datasets, in dataset
// then product order; ids are "<dataset>:<n>".
std::string build_retro_prompts(const std::vector<LoadedDataset> &datasets,
                                StereoMode mode);

// Every command writes manifest-<command>.json into config.out.
void cmd_canonicalize(const RunConfig &config, std::istream &in,
                      std::ostream &out);
void cmd_validate(const RunConfig &config, std::istream &in,
                  std::ostream &out);
// report.md, report.json and audit.jsonl.
void cmd_evaluate(const RunConfig &config);
// predictions.jsonl; predictions.jsonl.partial after an endpoint failure.
void cmd_sample(const RunConfig &config);
// instruct.jsonl
void cmd_gen_instruct(const RunConfig &config);
// chem_bpe.txt and vocab_report.json
void cmd_train_vocab(const RunConfig &config);
void cmd_tokenize(const RunConfig &config,
                  const std::filesystem::path &table, std::istream &in,
                  std::ostream &out);
// overlap.json and overlap.md; a and b default to the first two datasets.
void cmd_overlap(const RunConfig &config,
                 std::optional<std::filesystem::path> a,
                 std::optional<std::filesystem::path> b);
// fingerprints.rxfp, fingerprints.jsonl and edges.csv
void cmd_fingerprint(const RunConfig &config);

}  // namespace retrochem

#endif  // RETROCHEM_HARNESS_COMMANDS_H_
