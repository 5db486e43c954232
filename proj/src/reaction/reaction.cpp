//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/reaction/reaction.h"

#include <algorithm>
#include <set>

#include "retrochem/smiles/canonical.h"
#include "retrochem/smiles/parser.h"
#include "retrochem/smiles/validity.h"

namespace retrochem {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty()
         && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'
             || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

std::string sorted_canonical(std::span<const Species> species, bool stereo) {
  std::vector<std::string> parts;
  parts.reserve(species.size());
  const CanonicalOptions options { stereo, false };
  for (const Species &s: species) {
    if (!s.valid)
      throw ReactionError("invalid molecule in reaction: " + s.smiles);
    parts.push_back(canonicalize(*s.mol, options));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0)
      out += '.';
    out += parts[i];
  }
  return out;
}

std::set<std::string> key_set(std::span<const ReactionRecord> records,
                              KeyMode mode, bool stereo) {
  std::set<std::string> keys;
  for (const ReactionRecord &r: records) {
    if (r.all_valid())
      keys.insert(canonical_key(r, mode, stereo).key);
  }
  return keys;
}

}  // namespace

Species make_species(std::string_view smiles) {
  Species s;
  s.smiles = std::string(smiles);
  try {
    s.mol = parse_smiles(smiles);
    s.valid = check_validity(*s.mol).valid;
  } catch (const SmilesError &) {
    s.valid = false;
  }
  return s;
}

std::vector<Species> parse_species_list(std::string_view segment) {
  std::vector<Species> out;
  std::size_t start = 0;
  while (start <= segment.size()) {
    std::size_t end = segment.find('.', start);
    if (end == std::string_view::npos)
      end = segment.size();
    const std::string_view piece = trim(segment.substr(start, end - start));
    if (!piece.empty())
      out.push_back(make_species(piece));
    start = end + 1;
  }
  return out;
}

bool ReactionRecord::all_valid() const {
  auto ok = [](const std::vector<Species> &v) {
    return std::all_of(v.begin(), v.end(),
                       [](const Species &s) { return s.valid; });
  };
  return ok(reactants) && ok(conditions) && ok(products);
}

std::string join_smiles(std::span<const Species> species) {
  std::string out;
  for (std::size_t i = 0; i < species.size(); ++i) {
    if (i > 0)
      out += '.';
    out += species[i].smiles;
  }
  return out;
}

std::string ReactionRecord::reaction_smiles() const {
  return join_smiles(reactants) + '>' + join_smiles(conditions) + '>'
         + join_smiles(products);
}

ReactionRecord parse_reaction(std::string_view text) {
  text = trim(text);
  std::vector<std::string_view> segments;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find('>', start);
    if (end == std::string_view::npos) {
      segments.push_back(text.substr(start));
      break;
    }
    segments.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (segments.size() != 3)
    throw ReactionError("reaction must have 3 '>'-separated segments, got "
                        + std::to_string(segments.size()) + ": "
                        + std::string(text));
  ReactionRecord rec;
  rec.reactants = parse_species_list(segments[0]);
  rec.conditions = parse_species_list(segments[1]);
  rec.products = parse_species_list(segments[2]);
  if (rec.reactants.empty())
    throw ReactionError("empty reactant segment: " + std::string(text));
  if (rec.products.empty())
    throw ReactionError("empty product segment: " + std::string(text));
  return rec;
}

ReactionKey canonical_key(const ReactionRecord &rec, KeyMode mode,
                          bool stereo) {
  ReactionKey key;
  key.mode = mode;
  key.key = sorted_canonical(rec.reactants, stereo) + '>';
  if (mode == KeyMode::kWithConditions)
    key.key += sorted_canonical(rec.conditions, stereo);
  key.key += '>' + sorted_canonical(rec.products, stereo);
  return key;
}

std::string product_key(const ReactionRecord &rec, bool stereo) {
  return sorted_canonical(rec.products, stereo);
}

OverlapResult overlap(std::span<const ReactionRecord> a,
                      std::span<const ReactionRecord> b, KeyMode mode,
                      bool stereo) {
  const std::set<std::string> ka = key_set(a, mode, stereo);
  const std::set<std::string> kb = key_set(b, mode, stereo);
  OverlapResult result;
  std::set_intersection(ka.begin(), ka.end(), kb.begin(), kb.end(),
                        std::back_inserter(result.keys));
  result.count = result.keys.size();
  return result;
}

std::size_t distinct_key_count(std::span<const ReactionRecord> records,
                               KeyMode mode, bool stereo) {
  return key_set(records, mode, stereo).size();
}

std::map<std::string, std::vector<ReactionRecord>> group_by_product(
    std::span<const ReactionRecord> records, bool stereo) {
  std::map<std::string, std::vector<ReactionRecord>> groups;
  for (const ReactionRecord &r: records) {
    const bool ok = std::all_of(r.products.begin(), r.products.end(),
                                [](const Species &s) { return s.valid; });
    if (!ok || r.products.empty())
      continue;
    groups[product_key(r, stereo)].push_back(r);
  }
  return groups;
}

}  // namespace retrochem
