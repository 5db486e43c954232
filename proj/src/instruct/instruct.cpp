//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/instruct/instruct.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "retrochem/smiles/validity.h"
#include "retrochem/util/hash.h"
#include "retrochem/util/parallel.h"
#include "retrochem/util/random.h"

namespace retrochem {
namespace {

using Json = nlohmann::ordered_json;

// Stream separators so generators fed the same seed draw independently.
constexpr std::uint64_t kRetroSalt = 0x7265747230000001ULL;
constexpr std::uint64_t kForwardSalt = 0x666f727730000002ULL;
constexpr std::uint64_t kDesignSalt = 0x6465736930000003ULL;
constexpr std::uint64_t kYieldSalt = 0x7969656c30000004ULL;
constexpr std::uint64_t kDescriptionSalt = 0x6465736330000005ULL;
constexpr std::uint64_t kRateSalt = 0x7261746530000006ULL;

using Values = std::map<std::string, std::string>;

Values reaction_values(const ReactionRecord &rec) {
  return { { "reactants", join_smiles(rec.reactants) },
           { "conditions", join_smiles(rec.conditions) },
           { "products", join_smiles(rec.products) } };
}

InstructionEntry emit(const TemplateCatalog &catalog, Task task, int subtask,
                      Rng &rng, const Values &values, std::string record_id,
                      std::uint64_t seed) {
  const std::vector<const Template *> choices = catalog.find(task, subtask);
  if (choices.empty())
    throw CatalogError("catalog has no template for "
                       + std::string(to_string(task)) + " subtask "
                       + std::to_string(subtask));
  const Template &t = *choices[rng.uniform(0, choices.size() - 1)];
  InstructionEntry e;
  e.task = task;
  e.subtask = subtask;
  e.prompt = render(t.prompt, values);
  e.completion = render(t.completion, values);
  e.source_record_id = std::move(record_id);
  e.template_id = t.id;
  e.seed = seed;
  return e;
}

std::vector<InstructionEntry> gen_two_subtasks(const ReactionRecord &rec,
                                               const TemplateCatalog &catalog,
                                               std::uint64_t seed, Task task,
                                               std::uint64_t salt) {
  Rng rng(seed ^ salt);
  const Values values = reaction_values(rec);
  std::vector<InstructionEntry> out;
  out.push_back(emit(catalog, task, 1, rng, values, rec.record_id, seed));
  if (!rec.conditions.empty())
    out.push_back(emit(catalog, task, 2, rng, values, rec.record_id, seed));
  return out;
}

std::optional<std::string> get_string(const Json &j, const char *key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null())
    return std::nullopt;
  if (!it->is_string())
    throw std::invalid_argument(std::string("field ") + key
                                + " must be a string");
  return it->get<std::string>();
}

bool has(const std::optional<std::string> &field) {
  return field && !field->empty();
}

}  // namespace

MoleculeMeta parse_meta_json(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error &e) {
    throw std::invalid_argument(std::string("bad JSON: ") + e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument("metadata line is not a JSON object");
  MoleculeMeta m;
  m.id = get_string(j, "id").value_or("");
  m.smiles = get_string(j, "smiles").value_or("");
  m.iupac = get_string(j, "iupac");
  m.name_en = get_string(j, "name_en");
  m.name_zh = get_string(j, "name_zh");
  m.description = get_string(j, "description");
  if (const auto it = j.find("is_drug"); it != j.end() && !it->is_null()) {
    if (!it->is_boolean())
      throw std::invalid_argument("field is_drug must be a boolean");
    m.is_drug = it->get<bool>();
  }
  if (!m.smiles.empty()) {
    const ValidityReport report = validate_smiles(m.smiles);
    if (!report.valid)
      throw std::invalid_argument("invalid SMILES " + m.smiles + ": "
                                  + report.failures.front().detail);
  }
  return m;
}

std::string to_json(const InstructionEntry &entry) {
  Json j;
  j["task"] = std::string(to_string(entry.task));
  j["subtask"] = entry.subtask;
  j["prompt"] = entry.prompt;
  j["completion"] = entry.completion;
  j["source_record_id"] = entry.source_record_id;
  j["template_id"] = entry.template_id;
  j["seed"] = entry.seed;
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::vector<ReactionRecord> augment(const ReactionRecord &rec, int n,
                                    std::uint64_t seed) {
  if (n < 1)
    throw std::invalid_argument("augment needs n >= 1");
  std::vector<ReactionRecord> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Rng rng(splitmix64(seed + static_cast<std::uint64_t>(i)));
    ReactionRecord copy = rec;
    rng.shuffle(copy.reactants);
    rng.shuffle(copy.conditions);
    rng.shuffle(copy.products);
    out.push_back(std::move(copy));
  }
  return out;
}

std::vector<InstructionEntry> gen_retro(const ReactionRecord &rec,
                                        const TemplateCatalog &catalog,
                                        std::uint64_t seed) {
  return gen_two_subtasks(rec, catalog, seed, Task::kRetro, kRetroSalt);
}

std::vector<InstructionEntry> gen_forward(const ReactionRecord &rec,
                                          const TemplateCatalog &catalog,
                                          std::uint64_t seed) {
  return gen_two_subtasks(rec, catalog, seed, Task::kForward, kForwardSalt);
}

std::optional<InstructionEntry> gen_design(
    const ReactionRecord &rec, const TemplateCatalog &catalog,
    const DescriptorRegistry &registry, std::uint64_t seed,
    std::string *warning) {
  auto skip = [&](std::string why) -> std::optional<InstructionEntry> {
    if (warning)
      *warning = "design skipped for " + rec.record_id + ": " + why;
    return std::nullopt;
  };

  Rng rng(seed ^ kDesignSalt);
  const int subtask = static_cast<int>(rng.uniform(1, 3));
  if (subtask < 3 && rec.conditions.empty())
    return skip("subtask " + std::to_string(subtask) + " needs conditions");

  // Which molecules the properties describe: the catalysts, then also the
  // reactants, then every molecule in the reaction.
  struct Subject {
    std::string label;
    const Molecule *mol;
  };
  std::vector<Subject> subjects;
  auto add_role = [&](const char *role, const std::vector<Species> &list) {
    for (std::size_t i = 0; i < list.size(); ++i)
      subjects.push_back({ std::string(role) + " " + std::to_string(i + 1),
                           list[i].valid ? &*list[i].mol : nullptr });
  };
  if (subtask >= 2)
    add_role("reactant", rec.reactants);
  add_role("catalyst", rec.conditions);
  if (subtask == 3)
    add_role("product", rec.products);
  for (const Subject &s: subjects) {
    if (!s.mol)
      return skip(s.label + " is not a valid molecule");
  }
  if (subjects.empty())
    return skip("no molecules to describe");

  const std::vector<const Descriptor *> descriptors = registry.list();
  const std::size_t pool = subjects.size() * descriptors.size();
  if (pool == 0)
    return skip("descriptor registry is empty");
  const auto u = static_cast<std::size_t>(rng.uniform(1, kMaxDesignProperties));
  std::string properties;
  for (std::size_t pick: rng.sample(pool, std::min(u, pool))) {
    const Subject &s = subjects[pick / descriptors.size()];
    const Descriptor &d = *descriptors[pick % descriptors.size()];
    double value;
    try {
      value = d.compute(*s.mol);
    } catch (const DescriptorError &) {
      continue;
    }
    if (!properties.empty())
      properties += '\n';
    properties += "- " + s.label + ": " + d.name + "="
                  + format_descriptor_value(d, value);
    if (!d.unit.empty())
      properties += " " + d.unit;
  }
  if (properties.empty())
    return skip("no drawn property could be computed");

  Values values = reaction_values(rec);
  values["properties"] = properties;
  return emit(catalog, Task::kDesign, subtask, rng, values, rec.record_id,
              seed);
}

std::vector<InstructionEntry> gen_description(const MoleculeMeta &meta,
                                              const TemplateCatalog &catalog,
                                              std::uint64_t seed) {
  Rng rng(seed ^ kDescriptionSalt);
  Values values;
  auto bind = [&](const char *key, const std::optional<std::string> &v) {
    if (has(v))
      values[key] = *v;
  };
  if (!meta.smiles.empty())
    values["smiles"] = meta.smiles;
  bind("iupac", meta.iupac);
  bind("name_en", meta.name_en);
  bind("name_zh", meta.name_zh);
  bind("description", meta.description);

  // Name tasks are split by molecule kind; structure tasks apply to both.
  std::vector<int> subtasks = meta.is_drug ? std::vector<int> { 7, 8, 9 }
                                           : std::vector<int> { 1, 2, 3 };
  subtasks.insert(subtasks.end(), { 4, 5, 6 });
  std::sort(subtasks.begin(), subtasks.end());

  std::vector<InstructionEntry> out;
  for (int subtask: subtasks) {
    const std::set<std::string> need
        = bound_placeholders(Task::kDescription, subtask);
    const bool ready = std::all_of(need.begin(), need.end(),
                                   [&](const std::string &k) {
                                     return values.count(k) > 0;
                                   });
    if (ready)
      out.push_back(emit(catalog, Task::kDescription, subtask, rng, values,
                         meta.id, seed));
  }
  return out;
}

std::optional<InstructionEntry> gen_yield(const ReactionRecord &rec,
                                          const TemplateCatalog &catalog,
                                          std::uint64_t seed) {
  if (!rec.yield_percent)
    return std::nullopt;
  Rng rng(seed ^ kYieldSalt);
  Values values = reaction_values(rec);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *rec.yield_percent);
  values["yield"] = buf;
  return emit(catalog, Task::kYield, 1, rng, values, rec.record_id, seed);
}

Corpus generate_corpus(std::span<const ReactionRecord> records,
                       std::span<const MoleculeMeta> metas,
                       const TemplateCatalog &catalog,
                       const DescriptorRegistry &registry,
                       const CorpusOptions &options) {
  if (options.augment_copies < 1)
    throw std::invalid_argument("augment_copies must be at least 1");
  if (options.design_rate < 0.0 || options.design_rate > 1.0)
    throw std::invalid_argument("design_rate must lie in [0, 1]");

  struct Slot {
    std::vector<InstructionEntry> entries;
    std::vector<std::string> warnings;
  };
  const std::size_t n = records.size() + metas.size();
  std::vector<Slot> slots(n);

  auto work = [&](std::size_t i) {
    Slot &slot = slots[i];
    const std::uint64_t item_seed = splitmix64(options.root_seed + i);
    if (i >= records.size()) {
      if (options.description)
        slot.entries = gen_description(metas[i - records.size()], catalog,
                                       item_seed);
      return;
    }
    const std::vector<ReactionRecord> copies
        = augment(records[i], options.augment_copies, item_seed);
    for (std::size_t c = 0; c < copies.size(); ++c) {
      const ReactionRecord &rec = copies[c];
      const std::uint64_t seed = splitmix64(item_seed + c);
      auto append = [&](std::vector<InstructionEntry> more) {
        for (InstructionEntry &e: more)
          slot.entries.push_back(std::move(e));
      };
      if (options.retro)
        append(gen_retro(rec, catalog, seed));
      if (options.forward)
        append(gen_forward(rec, catalog, seed));
      if (options.design) {
        Rng gate(seed ^ kRateSalt);
        if (gate.real() < options.design_rate) {
          std::string warning;
          if (auto e = gen_design(rec, catalog, registry, seed, &warning))
            slot.entries.push_back(std::move(*e));
          else
            slot.warnings.push_back(std::move(warning));
        }
      }
      if (options.yield) {
        if (auto e = gen_yield(rec, catalog, seed))
          slot.entries.push_back(std::move(*e));
      }
    }
  };

  parallel_for(n, options.threads, work);

  Corpus corpus;
  for (Slot &slot: slots) {
    for (InstructionEntry &e: slot.entries) {
      ++corpus.counts[std::string(to_string(e.task)) + "/"
                      + std::to_string(e.subtask)];
      corpus.entries.push_back(std::move(e));
    }
    for (std::string &w: slot.warnings)
      corpus.warnings.push_back(std::move(w));
  }
  return corpus;
}

}  // namespace retrochem
