//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_METRICS_METRICS_H_
#define RETROCHEM_METRICS_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "retrochem/reaction/reaction.h"

namespace retrochem {

enum class StereoMode {
  kAware,
  kAgnostic,
};

std::string_view to_string(StereoMode mode);
StereoMode parse_stereo_mode(std::string_view text);

enum class Metric {
  kMaxFrag,
  kCoverage,
  kIntersection,
  kValidity,
};

class MetricError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string_view to_string(Metric metric);
// Accepts maxfrag, coverage, intersection, validity (case-insensitive).
Metric parse_metric(std::string_view text);

// A raw model sample and its interpretation. With two '>' the string is
// read as R>C>P and only R counts as precursors; with one '>' everything
// before it is precursors; without '>' every molecule is a precursor.
// More than two '>' makes the sample invalid.
struct ParsedPrediction {
  std::string raw;
  std::vector<Species> precursors;
  std::vector<Species> conditions;
  bool valid = false;

  // Canonical SMILES under the stereo mode the sample was parsed with;
  // filled only for valid samples.
  std::vector<std::string> precursor_keys;
  std::vector<std::string> condition_keys;
  std::string largest_key;
};

ParsedPrediction parse_prediction(std::string_view raw,
                                  StereoMode mode = StereoMode::kAware);

// One ground-truth route to a product, as canonical keys.
struct Pathway {
  std::vector<std::string> reactant_keys;  // sorted
  std::vector<std::string> condition_keys;  // sorted
  std::string largest_key;
};

// Throws ReactionError when the record holds an invalid molecule.
Pathway make_pathway(const ReactionRecord &rec,
                     StereoMode mode = StereoMode::kAware);

struct PredictionSet {
  std::string product_id;
  std::string product;  // canonical product SMILES
  std::vector<ParsedPrediction> samples;
  std::vector<Pathway> pathways;
};

bool maxfrag_hit(const ParsedPrediction &sample,
                 std::span<const Pathway> truths);
bool coverage_hit(const ParsedPrediction &sample,
                  std::span<const Pathway> truths);
// nullopt when no pathway carries conditions.
std::optional<bool> intersection_hit(const ParsedPrediction &sample,
                                     std::span<const Pathway> truths);

bool intersection_applicable(std::span<const Pathway> truths);

// Fraction of valid samples among all given samples (0 for none).
double validity_fraction(std::span<const ParsedPrediction> samples);

struct TopkScore {
  // nullopt for intersection when no product has ground-truth conditions.
  std::optional<double> value;
  std::size_t hits = 0;
  std::size_t total = 0;  // products (or samples for validity)
  bool truncated = false;  // some set had fewer than k samples
};

// Any-of-first-k over products for maxfrag, coverage and intersection;
// validity is the per-sample mean over the first k samples of every set.
TopkScore topk_score(std::span<const PredictionSet> sets, Metric metric,
                     std::size_t k);

// Mean over products of each product's valid fraction in its first k.
double validity_per_product(std::span<const PredictionSet> sets,
                            std::size_t k);

struct DatasetScore {
  std::string dataset;
  std::size_t k = 0;
  std::size_t n_products = 0;
  TopkScore maxfrag;
  TopkScore coverage;
  TopkScore intersection;
  TopkScore validity;
  double validity_per_product = 0;
};

DatasetScore score_dataset(std::string dataset,
                           std::span<const PredictionSet> sets,
                           std::size_t k);

struct ReportNotes {
  StereoMode stereo = StereoMode::kAware;
};

// One table per k, rows per dataset, columns Dataset | MaxFrag | Coverage |
// Intersection | Validity; percentages with one decimal, "—" when not
// applicable.
std::string render_markdown(std::span<const DatasetScore> scores,
                            const ReportNotes &notes = {});
std::string render_json(std::span<const DatasetScore> scores,
                        const ReportNotes &notes = {});

// "60.8" style cell text for a fraction.
std::string format_percent(double fraction);

// One JSON line per (product, sample) with hit flags; report cells can be
// recomputed from these.
std::string render_audit(std::string_view dataset,
                         std::span<const PredictionSet> sets);

}  // namespace retrochem

#endif  // RETROCHEM_METRICS_METRICS_H_
