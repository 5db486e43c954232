//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/metrics/metrics.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>

#include <json.hpp>

#include "retrochem/smiles/canonical.h"

namespace retrochem {
namespace {

using Json = nlohmann::ordered_json;

std::string key_of(const Molecule &mol, StereoMode mode) {
  return canonicalize(mol, { mode == StereoMode::kAware, false });
}

std::string largest_key(std::span<const Species> species, StereoMode mode) {
  std::vector<Molecule> mols;
  mols.reserve(species.size());
  for (const Species &s: species)
    mols.push_back(mode == StereoMode::kAware ? *s.mol : strip_stereo(*s.mol));
  return key_of(largest_fragment(mols), mode);
}

std::vector<std::string> sorted_keys(std::span<const Species> species,
                                     StereoMode mode) {
  std::vector<std::string> keys;
  keys.reserve(species.size());
  for (const Species &s: species)
    keys.push_back(key_of(*s.mol, mode));
  std::sort(keys.begin(), keys.end());
  return keys;
}

bool contains_sorted(const std::vector<std::string> &haystack,
                     const std::string &needle) {
  return std::binary_search(haystack.begin(), haystack.end(), needle);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char &c: out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Json score_json(const TopkScore &s) {
  Json j;
  j["value"] = s.value ? Json(*s.value) : Json(nullptr);
  j["hits"] = s.hits;
  j["total"] = s.total;
  j["truncated"] = s.truncated;
  return j;
}

}  // namespace

std::string_view to_string(StereoMode mode) {
  return mode == StereoMode::kAware ? "aware" : "agnostic";
}

StereoMode parse_stereo_mode(std::string_view text) {
  const std::string t = lower(text);
  if (t == "aware")
    return StereoMode::kAware;
  if (t == "agnostic")
    return StereoMode::kAgnostic;
  throw MetricError("stereo mode must be aware or agnostic, got "
                    + std::string(text));
}

std::string_view to_string(Metric metric) {
  switch (metric) {
  case Metric::kMaxFrag:
    return "maxfrag";
  case Metric::kCoverage:
    return "coverage";
  case Metric::kIntersection:
    return "intersection";
  case Metric::kValidity:
    return "validity";
  }
  return "unknown";
}

Metric parse_metric(std::string_view text) {
  const std::string t = lower(text);
  if (t == "maxfrag")
    return Metric::kMaxFrag;
  if (t == "coverage")
    return Metric::kCoverage;
  if (t == "intersection")
    return Metric::kIntersection;
  if (t == "validity")
    return Metric::kValidity;
  throw MetricError("unknown metric: " + std::string(text));
}

ParsedPrediction parse_prediction(std::string_view raw, StereoMode mode) {
  ParsedPrediction p;
  p.raw = std::string(raw);
  std::vector<std::string_view> segments;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = raw.find('>', start);
    if (end == std::string_view::npos) {
      segments.push_back(raw.substr(start));
      break;
    }
    segments.push_back(raw.substr(start, end - start));
    start = end + 1;
  }
  if (segments.size() > 3)
    return p;

  std::vector<Species> trailing;
  p.precursors = parse_species_list(segments[0]);
  if (segments.size() == 3) {
    p.conditions = parse_species_list(segments[1]);
    trailing = parse_species_list(segments[2]);
  } else if (segments.size() == 2) {
    trailing = parse_species_list(segments[1]);
  }
  if (p.precursors.empty())
    return p;
  auto all_valid = [](const std::vector<Species> &v) {
    return std::all_of(v.begin(), v.end(),
                       [](const Species &s) { return s.valid; });
  };
  p.valid = all_valid(p.precursors) && all_valid(p.conditions)
            && all_valid(trailing);
  if (!p.valid)
    return p;
  p.precursor_keys = sorted_keys(p.precursors, mode);
  p.condition_keys = sorted_keys(p.conditions, mode);
  p.largest_key = largest_key(p.precursors, mode);
  return p;
}

Pathway make_pathway(const ReactionRecord &rec, StereoMode mode) {
  if (!rec.all_valid())
    throw ReactionError("ground truth " + rec.record_id
                        + " contains an invalid molecule");
  if (rec.reactants.empty())
    throw ReactionError("ground truth " + rec.record_id + " has no reactants");
  Pathway p;
  p.reactant_keys = sorted_keys(rec.reactants, mode);
  p.condition_keys = sorted_keys(rec.conditions, mode);
  p.largest_key = largest_key(rec.reactants, mode);
  return p;
}

bool maxfrag_hit(const ParsedPrediction &sample,
                 std::span<const Pathway> truths) {
  if (!sample.valid)
    return false;
  return std::any_of(truths.begin(), truths.end(), [&](const Pathway &t) {
    return t.largest_key == sample.largest_key;
  });
}

bool coverage_hit(const ParsedPrediction &sample,
                  std::span<const Pathway> truths) {
  if (!sample.valid)
    return false;
  return std::any_of(truths.begin(), truths.end(), [&](const Pathway &t) {
    return std::all_of(t.reactant_keys.begin(), t.reactant_keys.end(),
                       [&](const std::string &k) {
                         return contains_sorted(sample.precursor_keys, k);
                       });
  });
}

bool intersection_applicable(std::span<const Pathway> truths) {
  return std::any_of(truths.begin(), truths.end(), [](const Pathway &t) {
    return !t.condition_keys.empty();
  });
}

std::optional<bool> intersection_hit(const ParsedPrediction &sample,
                                     std::span<const Pathway> truths) {
  if (!intersection_applicable(truths))
    return std::nullopt;
  if (!sample.valid)
    return false;
  return std::any_of(truths.begin(), truths.end(), [&](const Pathway &t) {
    return std::any_of(t.condition_keys.begin(), t.condition_keys.end(),
                       [&](const std::string &k) {
                         return contains_sorted(sample.condition_keys, k);
                       });
  });
}

double validity_fraction(std::span<const ParsedPrediction> samples) {
  if (samples.empty())
    return 0.0;
  const auto valid = std::count_if(samples.begin(), samples.end(),
                                   [](const auto &s) { return s.valid; });
  return double(valid) / double(samples.size());
}

TopkScore topk_score(std::span<const PredictionSet> sets, Metric metric,
                     std::size_t k) {
  if (k == 0)
    throw MetricError("k must be positive");
  TopkScore score;
  for (const PredictionSet &set: sets) {
    if (set.samples.size() < k)
      score.truncated = true;
    const std::size_t n = std::min(k, set.samples.size());
    const auto first = std::span(set.samples).first(n);
    switch (metric) {
    case Metric::kValidity:
      for (const ParsedPrediction &s: first) {
        score.hits += s.valid;
        ++score.total;
      }
      break;
    case Metric::kIntersection:
      if (!intersection_applicable(set.pathways))
        break;
      ++score.total;
      score.hits += std::any_of(first.begin(), first.end(), [&](const auto &s) {
        return intersection_hit(s, set.pathways).value_or(false);
      });
      break;
    case Metric::kMaxFrag:
    case Metric::kCoverage:
      ++score.total;
      score.hits += std::any_of(first.begin(), first.end(), [&](const auto &s) {
        return metric == Metric::kMaxFrag ? maxfrag_hit(s, set.pathways)
                                          : coverage_hit(s, set.pathways);
      });
      break;
    }
  }
  if (score.total > 0)
    score.value = double(score.hits) / double(score.total);
  else if (metric != Metric::kIntersection)
    score.value = 0.0;
  return score;
}

double validity_per_product(std::span<const PredictionSet> sets,
                            std::size_t k) {
  if (sets.empty())
    return 0.0;
  double sum = 0;
  for (const PredictionSet &set: sets) {
    const std::size_t n = std::min(k, set.samples.size());
    sum += validity_fraction(std::span(set.samples).first(n));
  }
  return sum / double(sets.size());
}

DatasetScore score_dataset(std::string dataset,
                           std::span<const PredictionSet> sets,
                           std::size_t k) {
  DatasetScore s;
  s.dataset = std::move(dataset);
  s.k = k;
  s.n_products = sets.size();
  s.maxfrag = topk_score(sets, Metric::kMaxFrag, k);
  s.coverage = topk_score(sets, Metric::kCoverage, k);
  s.intersection = topk_score(sets, Metric::kIntersection, k);
  s.validity = topk_score(sets, Metric::kValidity, k);
  s.validity_per_product = validity_per_product(sets, k);
  return s;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", fraction * 100.0);
  return buf;
}

std::string render_markdown(std::span<const DatasetScore> scores,
                            const ReportNotes &notes) {
  static constexpr const char *kHeader
      = "| Dataset | MaxFrag | Coverage | Intersection | Validity |\n"
        "|---|---:|---:|---:|---:|\n";
  auto cell = [](const TopkScore &s) {
    return s.value ? format_percent(*s.value) : std::string("—");
  };

  std::set<std::size_t> ks;
  for (const DatasetScore &s: scores)
    ks.insert(s.k);

  std::string out;
  bool truncated = false;
  if (ks.empty())
    out += kHeader;
  for (std::size_t k: ks) {
    if (!out.empty())
      out += '\n';
    out += "## Top-" + std::to_string(k) + "\n\n" + kHeader;
    for (const DatasetScore &s: scores) {
      if (s.k != k)
        continue;
      const bool short_set = s.maxfrag.truncated;
      truncated |= short_set;
      out += "| " + s.dataset + (short_set ? "*" : "") + " | "
             + cell(s.maxfrag) + " | " + cell(s.coverage) + " | "
             + cell(s.intersection) + " | " + cell(s.validity) + " |\n";
    }
  }
  out += "\nCoverage: every ground-truth reactant appears among the predicted "
         "precursors; extra molecules are allowed.\n"
         "Validity: averaged per sample.\n"
         "Molecules compared by canonical SMILES, stereo "
         + std::string(to_string(notes.stereo)) + ".\n";
  if (truncated)
    out += "*: some products had fewer than k samples.\n";
  return out;
}

std::string render_json(std::span<const DatasetScore> scores,
                        const ReportNotes &notes) {
  Json root;
  root["stereo"] = std::string(to_string(notes.stereo));
  root["coverage_rule"] = "subset";
  root["validity_rule"] = "per_sample";
  Json rows = Json::array();
  for (const DatasetScore &s: scores) {
    Json r;
    r["dataset"] = s.dataset;
    r["k"] = s.k;
    r["n_products"] = s.n_products;
    r["maxfrag"] = score_json(s.maxfrag);
    r["coverage"] = score_json(s.coverage);
    r["intersection"] = score_json(s.intersection);
    r["validity"] = score_json(s.validity);
    r["validity_per_product"] = s.validity_per_product;
    rows.push_back(std::move(r));
  }
  root["scores"] = std::move(rows);
  return root.dump(2) + "\n";
}

std::string render_audit(std::string_view dataset,
                         std::span<const PredictionSet> sets) {
  std::string out;
  for (const PredictionSet &set: sets) {
    for (std::size_t i = 0; i < set.samples.size(); ++i) {
      const ParsedPrediction &s = set.samples[i];
      Json j;
      j["dataset"] = std::string(dataset);
      j["product_id"] = set.product_id;
      j["product"] = set.product;
      j["sample"] = i + 1;
      j["raw"] = s.raw;
      j["valid"] = s.valid;
      j["maxfrag"] = maxfrag_hit(s, set.pathways);
      j["coverage"] = coverage_hit(s, set.pathways);
      const auto inter = intersection_hit(s, set.pathways);
      j["intersection"] = inter ? Json(*inter) : Json(nullptr);
      out += j.dump(-1, ' ', false, Json::error_handler_t::replace) + '\n';
    }
  }
  return out;
}

}  // namespace retrochem
