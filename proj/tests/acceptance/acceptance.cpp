//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run. Each criterion prints one PASS or FAIL line followed by
// an indented detail line; the exit status is non-zero if any failed.
//

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "retrochem/bpe/bpe.h"
#include "retrochem/descriptors/descriptors.h"
#include "retrochem/harness/commands.h"
#include "retrochem/harness/config.h"
#include "retrochem/instruct/instruct.h"
#include "retrochem/metrics/metrics.h"
#include "retrochem/reaction/reaction.h"
#include "retrochem/rxnfp/rxnfp.h"
#include "retrochem/smiles/canonical.h"
#include "retrochem/smiles/parser.h"
#include "retrochem/smiles/validity.h"
#include "retrochem/util/log.h"
#include "retrochem/util/random.h"
#include "support/fixtures.h"
#include "support/stub_endpoint.h"

using namespace retrochem;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> problems;

  void check(bool cond, const std::string &what) {
    if (!cond) {
      ok = false;
      if (problems.size() < 5)
        problems.push_back(what);
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char *format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

const std::vector<std::string> &molecules() {
  static const std::vector<std::string> mols = fixture::canonical_fixture();
  return mols;
}

fs::path manifest(const std::string &name) {
  return fixture::data_path("datasets/" + name + ".toml");
}

std::vector<LoadedDataset> fixture_datasets() {
  return load_datasets({ manifest("uspto_mini"), manifest("biochem_mini"),
                         manifest("yields_10") });
}

std::string dotted(const std::vector<std::string> &parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i)
    out += (i ? "." : "") + parts[i];
  return out;
}

// Records built from fixture molecules: 1-3 reactants, half with 1-2
// conditions, most with a yield.
std::vector<ReactionRecord> synthetic_corpus(std::size_t n,
                                             std::uint64_t seed) {
  const auto &mols = molecules();
  Rng rng(seed);
  auto pick = [&] {
    return mols[static_cast<std::size_t>(rng.uniform(0, mols.size() - 1))];
  };
  std::vector<ReactionRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> reactants, conditions;
    for (int j = rng.uniform(1, 3); j > 0; --j)
      reactants.push_back(pick());
    if (rng.real() < 0.5) {
      for (int j = rng.uniform(1, 2); j > 0; --j)
        conditions.push_back(pick());
    }
    ReactionRecord rec = parse_reaction(dotted(reactants) + ">"
                                        + dotted(conditions) + ">" + pick());
    rec.record_id = "s" + std::to_string(i);
    rec.source = "synthetic";
    if (rng.real() < 0.8)
      rec.yield_percent = static_cast<double>(rng.uniform(0, 1000)) / 10.0;
    out.push_back(std::move(rec));
  }
  return out;
}

// Same reaction with every species respelled and each side shuffled.
ReactionRecord respelled(const ReactionRecord &rec, Rng &rng) {
  auto side = [&](const std::vector<Species> &species) {
    std::vector<std::string> parts;
    for (const Species &s: species)
      parts.push_back(random_smiles(*s.mol, rng.next()));
    rng.shuffle(parts);
    return dotted(parts);
  };
  ReactionRecord out = parse_reaction(side(rec.reactants) + ">"
                                      + side(rec.conditions) + ">"
                                      + side(rec.products));
  out.record_id = rec.record_id;
  return out;
}

// 1. Canonical SMILES is invariant under atom and bond order.
Outcome canonicalization() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t random_checks = 0, exhaustive_checks = 0, small = 0;
  Rng rng(20240601);
  for (const std::string &s: molecules()) {
    const Molecule mol = parse_smiles(s);
    const std::string expected = canonicalize(mol);
    const int n = mol.num_atoms();
    const int m = mol.num_bonds();
    std::vector<int> perm(n), bond_perm(m);
    for (int t = 0; t < 200; ++t) {
      std::iota(perm.begin(), perm.end(), 0);
      std::iota(bond_perm.begin(), bond_perm.end(), 0);
      rng.shuffle(perm);
      rng.shuffle(bond_perm);
      auto swaps = std::make_unique<bool[]>(static_cast<std::size_t>(m) + 1);
      for (int b = 0; b < m; ++b)
        swaps[b] = rng.real() < 0.5;
      const Molecule shuffled = reorder_bonds(
          relabel_atoms(mol, perm), bond_perm,
          std::span<const bool>(swaps.get(), static_cast<std::size_t>(m)));
      const std::string got = canonicalize(shuffled);
      o.check(got == expected, s + " permuted -> " + got);
      ++random_checks;
    }
    // Also through text: a random spelling must parse back to the same form.
    const std::string spelled = random_smiles(mol, rng.next());
    o.check(canonical_smiles(spelled) == expected,
            s + " respelled as " + spelled);

    if (mol.heavy_atom_count() > 8)
      continue;
    ++small;
    std::vector<int> heavy;
    for (int i = 0; i < n; ++i) {
      if (mol.atom(i).element != 1)
        heavy.push_back(i);
    }
    std::vector<int> order = heavy;
    do {
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = 0; i < heavy.size(); ++i)
        perm[heavy[i]] = order[i];
      const std::string got = canonicalize(relabel_atoms(mol, perm));
      o.check(got == expected, s + " exhaustive -> " + got);
      ++exhaustive_checks;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  const double elapsed = seconds_since(start);
  o.check(elapsed < 60.0, "runtime " + fmt("%.1f s", elapsed));
  o.detail = std::to_string(molecules().size()) + " molecules, "
             + std::to_string(random_checks) + " random permutations, "
             + std::to_string(exhaustive_checks) + " exhaustive over "
             + std::to_string(small) + " small molecules, "
             + fmt("%.1f s", elapsed);
  return o;
}

// 2. Hand-labelled legal and illegal strings.
Outcome validity_suite() {
  Outcome o;
  std::size_t cases = 0, errors = 0;
  for (const std::string &line:
       fixture::read_lines(fixture::data_path("validity_suite.tsv"))) {
    std::istringstream in(line);
    std::string smiles, label;
    std::getline(in, smiles, '\t');
    std::getline(in, label, '\t');
    ++cases;
    const bool valid = validate_smiles(smiles).valid;
    if (valid != (label == "valid")) {
      ++errors;
      o.check(false, smiles + " expected " + label);
    }
  }
  o.check(cases == 50, "suite has " + std::to_string(cases) + " cases");
  o.detail = std::to_string(cases) + " cases, " + std::to_string(errors)
             + " misclassified";
  return o;
}

// Prediction sets where sample j of product i is samples(i, j).
std::vector<PredictionSet> prediction_sets(
    const std::map<std::string, std::vector<ReactionRecord>> &groups,
    const std::function<std::vector<std::string>(
        std::size_t, const std::vector<ReactionRecord> &)> &samples) {
  std::vector<PredictionSet> sets;
  std::size_t i = 0;
  for (const auto &[key, recs]: groups) {
    PredictionSet set;
    set.product_id = key;
    set.product = key;
    for (const std::string &raw: samples(i++, recs))
      set.samples.push_back(parse_prediction(raw));
    for (const ReactionRecord &rec: recs)
      set.pathways.push_back(make_pathway(rec));
    sets.push_back(std::move(set));
  }
  return sets;
}

// 3. Echo oracle, positional fixture and top-k monotonicity.
Outcome metric_contracts() {
  Outcome o;
  std::string echo_detail;
  for (const LoadedDataset &d: fixture_datasets()) {
    const auto groups = group_by_product(d.ingest.records);
    const auto sets = prediction_sets(
        groups, [](std::size_t, const std::vector<ReactionRecord> &recs) {
          std::vector<std::string> out;
          for (std::size_t j = 0; j < 30; ++j)
            out.push_back(recs[j % recs.size()].reaction_smiles());
          return out;
        });
    const DatasetScore score = score_dataset(d.manifest.name, sets, 30);
    const std::string &name = d.manifest.name;
    o.check(score.maxfrag.value == 1.0, name + " maxfrag");
    o.check(score.coverage.value == 1.0, name + " coverage");
    o.check(score.validity.value == 1.0, name + " validity");
    bool any_conditions = false;
    for (const ReactionRecord &rec: d.ingest.records)
      any_conditions |= !rec.conditions.empty();
    if (any_conditions)
      o.check(score.intersection.value == 1.0, name + " intersection");
    else
      o.check(!score.intersection.value, name + " intersection applicable");
    const DatasetScore one[] = { score };
    const std::string md = render_markdown(one);
    const std::string cells = any_conditions ? "100.0" : "—";
    const std::string row = "| " + name + " | 100.0 | 100.0 | " + cells
                            + " | 100.0 |";
    o.check(md.find(row) != std::string::npos, name + " row " + row);
    echo_detail += (echo_detail.empty() ? "" : ", ") + name;
  }

  // Three products, hits at sample 1 and sample 11 of 30.
  {
    const auto d = load_datasets({ manifest("uspto_mini") });
    const auto groups = group_by_product(d[0].ingest.records);
    std::map<std::string, std::vector<ReactionRecord>> three;
    for (const auto &[key, recs]: groups) {
      if (three.size() < 3)
        three.emplace(key, recs);
    }
    const auto sets = prediction_sets(
        three, [](std::size_t i, const std::vector<ReactionRecord> &recs) {
          std::vector<std::string> out(30, "CCCCCCCCCCCC>>C");
          if (i == 0)
            out[0] = recs[0].reaction_smiles();
          if (i == 1)
            out[10] = recs[0].reaction_smiles();
          return out;
        });
    const DatasetScore top10 = score_dataset("Positional", sets, 10);
    const DatasetScore top30 = score_dataset("Positional", sets, 30);
    o.check(format_percent(*top10.maxfrag.value) == "33.3",
            "top-10 " + format_percent(*top10.maxfrag.value));
    o.check(format_percent(*top30.maxfrag.value) == "66.7",
            "top-30 " + format_percent(*top30.maxfrag.value));
    o.check(format_percent(*top10.coverage.value) == "33.3", "top-10 coverage");
    o.check(format_percent(*top30.coverage.value) == "66.7", "top-30 coverage");
  }

  // Random mixtures of true reactions, decoys from other products,
  // condition-free variants and junk.
  std::vector<ReactionRecord> pool;
  for (const LoadedDataset &d: fixture_datasets())
    pool.insert(pool.end(), d.ingest.records.begin(), d.ingest.records.end());
  const auto groups = group_by_product(pool);
  Rng rng(77);
  const std::size_t ks[] = { 1, 3, 10, 30 };
  const Metric metrics[] = { Metric::kMaxFrag, Metric::kCoverage,
                             Metric::kIntersection };
  std::size_t trials = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto sets = prediction_sets(
        groups, [&](std::size_t, const std::vector<ReactionRecord> &recs) {
          std::vector<std::string> out;
          const auto n = static_cast<std::size_t>(rng.uniform(1, 30));
          for (std::size_t j = 0; j < n; ++j) {
            const double r = rng.real();
            const ReactionRecord &own
                = recs[static_cast<std::size_t>(rng.uniform(0, recs.size() - 1))];
            if (r < 0.1) {
              out.push_back(own.reaction_smiles());
            } else if (r < 0.2) {
              out.push_back(join_smiles(own.reactants) + ">>");
            } else if (r < 0.7) {
              out.push_back(pool[static_cast<std::size_t>(
                                     rng.uniform(0, pool.size() - 1))]
                                .reaction_smiles());
            } else if (r < 0.85) {
              out.push_back("C1CC>>");
            } else {
              out.push_back(molecules()[static_cast<std::size_t>(
                  rng.uniform(0, molecules().size() - 1))]);
            }
          }
          return out;
        });
    for (Metric metric: metrics) {
      std::optional<double> previous;
      for (std::size_t k: ks) {
        const TopkScore score = topk_score(sets, metric, k);
        if (previous && score.value)
          o.check(*score.value >= *previous,
                  std::string(to_string(metric)) + " dropped at k="
                      + std::to_string(k) + " trial " + std::to_string(t));
        if (score.value)
          previous = score.value;
      }
    }
    ++trials;
  }
  o.detail = "echo 100.0 on " + echo_detail
             + "; positional 33.3/66.7; monotone over "
             + std::to_string(trials) + " trials";
  return o;
}

// 4. Worked literature cases entered as ground truth with their predictions.
Outcome worked_cases() {
  Outcome o;
  struct Case {
    const char *dataset;
    const char *product;
    const char *reactants;
    const char *conditions;  // ground truth
    const char *prediction;
  };
  const Case cases[] = {
    { "USPTO-50k", "CNc1nc(Cl)ncc1[N+](=O)[O-]",
      "CN.O=[N+]([O-])c1cnc(Cl)nc1Cl", "C1COCC1",
      "CN.O=[N+]([O-])c1cnc(Cl)nc1Cl>C1COCC1>CNc1nc(Cl)ncc1[N+](=O)[O-]" },
    { "USPTO-50k",
      "CCOC(=O)c1cnc(N)c2c(COc3cc(-c4nnc(-c5ccc(Cl)cc5)o4)ccc3C)csc12",
      "N.Clc1c2c(scc2COc2c(C)ccc(-c3nnc(-c4ccc(Cl)cc4)o3)c2)c(C(OCC)=O)cn1",
      "",
      "N.Clc1c2c(scc2COc2c(C)ccc(-c3nnc(-c4ccc(Cl)cc4)o3)c2)c(C(OCC)=O)cn1"
      ">C(C)(O)C>"
      "CCOC(=O)c1cnc(N)c2c(COc3cc(-c4nnc(-c5ccc(Cl)cc5)o4)ccc3C)csc12" },
    { "BioChem", "CNCC1Cc2cc(-c3ccccc3)cc(-c3ccccc3Cl)c2O1",
      "CN.Cc1ccc(S(=O)(=O)OCC2Cc3cc(-c4ccccc4)cc(-c4ccccc4Cl)c3O2)cc1", "",
      "CN.Cc1ccc(S(=O)(=O)OCC2Cc3cc(-c4ccccc4)cc(-c4ccccc4Cl)c3O2)cc1"
      ">S(C)(=O)C>CNCC1Cc2cc(-c3ccccc3)cc(-c3ccccc3Cl)c2O1" },
    { "BioChem",
      "COc1ccc([C@@H]2Sc3cc(C)ccc3N(CCN(C)Cc3ccccc3)C(=O)[C@@H]2OC(C)=O)cc1",
      "CC(=O)OC(C)=O.c12ccc(C)cc1S[C@@H](c1ccc(OC)cc1)[C@@H](O)C(=O)N2CCN(C)"
      "Cc1ccccc1",
      "",
      "CC(=O)OC(C)=O.c12ccc(C)cc1S[C@@H](c1ccc(OC)cc1)[C@@H](O)C(=O)N2CCN(C)"
      "Cc1ccccc1>c1cccnc1>"
      "COc1ccc([C@@H]2Sc3cc(C)ccc3N(CCN(C)Cc3ccccc3)C(=O)[C@@H]2OC(C)=O)cc1" },
    { "BioChem", "CCc1nc2ccccc2c(=O)n1CCCl",
      "O=S(Cl)Cl.c12ccccc1nc(CC)n(CCO)c2=O", "",
      "O=S(Cl)Cl.c12ccccc1nc(CC)n(CCO)c2=O>ClC(Cl)Cl>"
      "CCc1nc2ccccc2c(=O)n1CCCl" },
    { "AAAA", "C=C[C@H](c1ccccc1)n1cnc2ccccc21",
      "c12ccccc1[nH]cn2.O=C(OC/C=C/c1ccccc1)OC", "c1ccoc1",
      "C=C.c12ccccc1[nH]cn2.O=C(OC/C=C/c1ccccc1)OC>c1ccoc1>"
      "C=C[C@H](c1ccccc1)n1cnc2ccccc21" },
    { "AAAA", "C=C[C@H](c1ccc(Br)cc1)n1cnc2ccccc21",
      "c1nc2ccccc2[nH]1.COC(=O)OC\\C=C\\c1ccc(Br)cc1", "c1ccoc1",
      "c1nc2ccccc2[nH]1.CBr.C=C.COC(=O)OC\\C=C\\c1ccc(Br)cc1>c1ccoc1>"
      "C=C[C@H](c1ccc(Br)cc1)n1cnc2ccccc21" },
  };

  std::map<std::string, std::vector<PredictionSet>> by_dataset;
  std::vector<std::string> order;
  std::string hits;
  int index = 0;
  for (const Case &c: cases) {
    ++index;
    const ReactionRecord rec = parse_reaction(
        std::string(c.reactants) + ">" + c.conditions + ">" + c.product);
    o.check(rec.all_valid(), "case " + std::to_string(index) + " invalid");
    PredictionSet set;
    set.product = product_key(rec);
    set.product_id = "case" + std::to_string(index);
    set.pathways.push_back(make_pathway(rec));
    set.samples.push_back(parse_prediction(c.prediction));
    const bool mf = maxfrag_hit(set.samples[0], set.pathways);
    const bool cov = coverage_hit(set.samples[0], set.pathways);
    const std::optional<bool> inter
        = intersection_hit(set.samples[0], set.pathways);
    o.check(mf, "case " + std::to_string(index) + " maxfrag miss");
    o.check(cov, "case " + std::to_string(index) + " coverage miss");
    if (*c.conditions)
      o.check(inter.value_or(false),
              "case " + std::to_string(index) + " intersection miss");
    hits += " " + std::to_string(index) + ":" + (mf ? "M" : "m")
            + (cov ? "C" : "c")
            + (inter ? (*inter ? "I" : "i") : "-");
    if (!by_dataset.count(c.dataset))
      order.push_back(c.dataset);
    by_dataset[c.dataset].push_back(std::move(set));
  }
  std::vector<DatasetScore> scores;
  for (const std::string &name: order)
    scores.push_back(score_dataset(name, by_dataset[name], 1));
  const std::string md = render_markdown(scores);
  for (const char *row: { "| USPTO-50k | 100.0 | 100.0 | 100.0 | 100.0 |",
                          "| BioChem | 100.0 | 100.0 | — | 100.0 |",
                          "| AAAA | 100.0 | 100.0 | 100.0 | 100.0 |" })
    o.check(md.find(row) != std::string::npos, std::string("missing ") + row);
  o.detail = "per case (Maxfrag/Coverage/Intersection):" + hits;
  return o;
}

std::string corpus_bytes(const Corpus &c) {
  std::string out;
  for (const InstructionEntry &e: c.entries)
    out += to_json(e) + "\n";
  return out;
}

// 5. Instruction generator accounting and reproducibility.
Outcome generator_accounting() {
  Outcome o;
  const TemplateCatalog &catalog = TemplateCatalog::builtin();
  const DescriptorRegistry &registry = DescriptorRegistry::builtin();
  std::vector<std::pair<std::string, std::vector<ReactionRecord>>> corpora;
  for (const LoadedDataset &d: fixture_datasets())
    corpora.emplace_back(d.manifest.name, d.ingest.records);
  corpora.emplace_back("synthetic-10k", synthetic_corpus(10000, 5));

  double big_seconds = 0;
  std::string summary;
  for (const auto &[name, records]: corpora) {
    std::map<std::string, const ReactionRecord *> by_id;
    for (const ReactionRecord &rec: records)
      by_id[rec.record_id] = &rec;
    CorpusOptions options;
    options.root_seed = 11;
    options.augment_copies = 2;
    options.description = false;
    const auto start = Clock::now();
    const Corpus first = generate_corpus(records, {}, catalog, registry,
                                         options);
    if (name == "synthetic-10k")
      big_seconds = seconds_since(start);
    std::size_t retro = 0, forward = 0;
    for (const InstructionEntry &e: first.entries) {
      retro += e.task == Task::kRetro;
      forward += e.task == Task::kForward;
      if ((e.task == Task::kRetro || e.task == Task::kForward)
          && e.subtask == 2) {
        const auto it = by_id.find(e.source_record_id);
        o.check(it != by_id.end() && !it->second->conditions.empty(),
                name + ": subtask 2 from " + e.source_record_id);
      }
    }
    o.check(retro == forward, name + ": retro " + std::to_string(retro)
                                  + " forward " + std::to_string(forward));
    const std::string bytes = corpus_bytes(first);
    o.check(corpus_bytes(generate_corpus(records, {}, catalog, registry,
                                         options))
                == bytes,
            name + ": regeneration differs");
    options.threads = 4;
    o.check(corpus_bytes(generate_corpus(records, {}, catalog, registry,
                                         options))
                == bytes,
            name + ": threads change output");
    summary += (summary.empty() ? "" : ", ") + name + " "
               + std::to_string(retro) + "/" + std::to_string(forward);
  }
  o.check(big_seconds < 30.0, "10k corpus took " + fmt("%.1f s", big_seconds));
  o.detail = "retro/forward " + summary + "; 10k records in "
             + fmt("%.1f s", big_seconds);
  return o;
}

std::string random_utf8(Rng &rng) {
  std::string s;
  for (int n = rng.uniform(0, 30); n > 0; --n) {
    const double r = rng.real();
    if (r < 0.1) {
      s += static_cast<char>(rng.uniform(0, 255));  // possibly malformed
      continue;
    }
    std::uint32_t cp;
    if (r < 0.6)
      cp = static_cast<std::uint32_t>(rng.uniform(0x20, 0x7e));
    else if (r < 0.8)
      cp = static_cast<std::uint32_t>(rng.uniform(0x80, 0x7ff));
    else if (r < 0.95)
      cp = static_cast<std::uint32_t>(rng.uniform(0x4e00, 0x9fff));
    else
      cp = static_cast<std::uint32_t>(rng.uniform(0x10000, 0x10ffff));
    if (cp < 0x80) {
      s += static_cast<char>(cp);
    } else if (cp < 0x800) {
      s += static_cast<char>(0xc0 | cp >> 6);
      s += static_cast<char>(0x80 | (cp & 0x3f));
    } else if (cp < 0x10000) {
      s += static_cast<char>(0xe0 | cp >> 12);
      s += static_cast<char>(0x80 | (cp >> 6 & 0x3f));
      s += static_cast<char>(0x80 | (cp & 0x3f));
    } else {
      s += static_cast<char>(0xf0 | cp >> 18);
      s += static_cast<char>(0x80 | (cp >> 12 & 0x3f));
      s += static_cast<char>(0x80 | (cp >> 6 & 0x3f));
      s += static_cast<char>(0x80 | (cp & 0x3f));
    }
  }
  return s;
}

// 6. Chemistry-aware BPE.
Outcome bpe() {
  Outcome o;
  const std::vector<std::string> &mols = molecules();
  const long counts[] = { 0, 5, 20, 50, 100, 200, 400 };
  std::vector<MergeTable> tables;
  for (long n: counts)
    tables.push_back(train_bpe(mols, { n, 1 }));
  const MergeTable &table = tables.back();

  Rng rng(9);
  std::vector<std::string> strings;
  for (int i = 0; i < 5000; ++i)
    strings.push_back(random_utf8(rng));
  for (int i = 0; i < 5000; ++i) {
    const std::string &s
        = mols[static_cast<std::size_t>(rng.uniform(0, mols.size() - 1))];
    strings.push_back(random_smiles(parse_smiles(s), rng.next()));
  }
  std::size_t round_trips = 0;
  for (const std::string &s: strings) {
    const bool ok = decode(encode(s, table)) == s;
    o.check(ok, "round trip failed for \"" + s + "\"");
    round_trips += ok;
  }

  const std::vector<std::string> tiny = { "CCO", "CCO", "CCN" };
  const MergeTable first = train_bpe(tiny, { 1, 1 });
  o.check(first.merges().size() == 1
              && first.merges()[0] == TokenPair("C", "C"),
          "first merge is not (C, C)");

  std::size_t single = 0;
  for (const std::string &e: element_tokens()) {
    const bool ok = encode(e, table).size() == 1;
    o.check(ok, e + " splits");
    single += ok;
  }
  o.check(element_tokens().size() == 118, "element list size");

  // Compression per string never gets worse as merges are added.
  std::vector<std::size_t> totals(tables.size(), 0);
  for (std::size_t i = 5000; i < strings.size(); ++i) {
    std::size_t previous = SIZE_MAX;
    for (std::size_t t = 0; t < tables.size(); ++t) {
      const std::size_t n = encode(strings[i], tables[t]).size();
      totals[t] += n;
      o.check(n <= previous, "token count rose for " + strings[i]);
      previous = n;
    }
  }
  std::string trend;
  for (std::size_t t = 0; t < tables.size(); ++t)
    trend += (t ? " " : "") + std::to_string(totals[t]);
  o.detail = std::to_string(round_trips) + "/" + std::to_string(strings.size())
             + " round trips, " + std::to_string(single)
             + "/118 single-token elements, SMILES tokens by merge count: "
             + trend;
  return o;
}

// 7. Differential reaction fingerprints.
Outcome fingerprints() {
  Outcome o;
  const std::vector<std::string> &mols = molecules();
  Rng rng(31);
  for (std::size_t i = 0; i < 100; ++i) {
    const Molecule mol = parse_smiles(mols[i * 5]);
    const ReactionRecord rec = parse_reaction(
        mols[i * 5] + ">>" + random_smiles(mol, rng.next()));
    o.check(drfp(rec).popcount() == 0, "identity " + mols[i * 5]);
  }
  auto pick = [&] {
    return mols[static_cast<std::size_t>(rng.uniform(0, mols.size() - 1))];
  };
  auto spell = [&](const std::string &s) {
    return random_smiles(parse_smiles(s), rng.next());
  };
  for (int t = 0; t < 100; ++t) {
    const std::string a = pick(), b = pick(), spectator = pick();
    const ReactionRecord plain = parse_reaction(a + ">>" + b);
    const ReactionRecord with = parse_reaction(
        spell(a) + "." + spell(spectator) + ">>" + spell(spectator) + "."
        + spell(b));
    o.check(drfp(plain) == drfp(with), "spectator " + spectator);
  }

  const std::vector<ReactionRecord> corpus = synthetic_corpus(10000, 13);
  const auto start = Clock::now();
  const auto once = drfp_all(corpus, {}, 1);
  const double elapsed = seconds_since(start);
  o.check(drfp_all(corpus, {}, 1) == once, "second run differs");
  o.check(drfp_all(corpus, {}, 4) == once, "4 threads differ");
  o.check(elapsed < 30.0, "10k fingerprints took " + fmt("%.1f s", elapsed));
  o.detail = "100 identities zero, 100 spectator records cancel, 10k "
             "fingerprints in "
             + fmt("%.1f s", elapsed) + ", identical across runs and threads";
  return o;
}

// 8. Overlap audit.
Outcome overlap_audit() {
  Outcome o;
  std::vector<std::pair<std::string, std::vector<ReactionRecord>>> sets;
  for (const LoadedDataset &d: fixture_datasets())
    sets.emplace_back(d.manifest.name, d.ingest.records);
  sets.emplace_back("synthetic-a", synthetic_corpus(1500, 1));
  // Shares half its records with synthetic-a, a third of them with the
  // conditions swapped out.
  {
    std::vector<ReactionRecord> b = synthetic_corpus(1500, 2);
    Rng rng(4);
    for (std::size_t i = 0; i < 750; ++i) {
      b[i] = sets.back().second[i];
      if (i % 3 == 0)
        b[i].conditions = parse_species_list(
            molecules()[static_cast<std::size_t>(rng.uniform(0, 499))]);
    }
    sets.emplace_back("synthetic-b", std::move(b));
  }

  const KeyMode modes[] = { KeyMode::kWithConditions,
                            KeyMode::kWithoutConditions };
  std::size_t pairs = 0;
  for (const auto &[an, a]: sets) {
    for (const auto &[bn, b]: sets) {
      const std::size_t with = overlap(a, b, KeyMode::kWithConditions).count;
      const std::size_t without
          = overlap(a, b, KeyMode::kWithoutConditions).count;
      o.check(with <= without, an + " x " + bn + ": " + std::to_string(with)
                                   + " > " + std::to_string(without));
      ++pairs;
    }
    for (KeyMode mode: modes)
      o.check(overlap(a, a, mode).count == distinct_key_count(a, mode),
              an + " self overlap");
  }

  Rng rng(8);
  std::string dup_detail;
  for (const auto &[name, recs]: sets) {
    std::vector<ReactionRecord> copy;
    for (const ReactionRecord &rec: recs)
      copy.push_back(respelled(rec, rng));
    rng.shuffle(copy);
    for (KeyMode mode: modes) {
      const std::size_t found = overlap(recs, copy, mode).count;
      const std::size_t distinct = distinct_key_count(recs, mode);
      o.check(found == distinct, name + " permuted copy: "
                                     + std::to_string(found) + " of "
                                     + std::to_string(distinct));
    }
  }
  const auto &synth = sets[sets.size() - 2].second;
  const auto &shared = sets.back().second;
  o.detail = std::to_string(pairs) + " ordered pairs; synthetic-a x b "
             + std::to_string(overlap(synth, shared,
                                      KeyMode::kWithConditions).count)
             + " with conditions, "
             + std::to_string(overlap(synth, shared,
                                      KeyMode::kWithoutConditions).count)
             + " without; permuted copies fully detected";
  return o;
}

// 9. Byte-identical reruns of evaluate and sample.
Outcome determinism() {
  Outcome o;
  fixture::TempDir dir("acceptance");

  // Echo predictions for every fixture product, with a junk sample mixed in.
  std::string preds;
  for (const LoadedDataset &d: fixture_datasets()) {
    for (const auto &[key, recs]: group_by_product(d.ingest.records)) {
      nlohmann::json j;
      j["dataset"] = d.manifest.name;
      j["product"] = key;
      std::vector<std::string> samples = { "C1CC>>" };
      for (const ReactionRecord &rec: recs)
        samples.push_back(rec.reaction_smiles());
      j["samples"] = samples;
      preds += j.dump() + "\n";
    }
  }
  fixture::write_text(dir / "predictions.jsonl", preds);
  RunConfig config;
  config.datasets = { manifest("uspto_mini"), manifest("biochem_mini"),
                      manifest("yields_10") };
  config.predictions_file = dir / "predictions.jsonl";
  config.k = { 1, 3, 10 };
  for (const char *run: { "eval1", "eval2" }) {
    config.out = dir / run;
    cmd_evaluate(config);
  }
  config.threads = 4;
  config.out = dir / "eval3";
  cmd_evaluate(config);
  for (const char *file: { "report.md", "report.json", "audit.jsonl" }) {
    const std::string first = fixture::slurp(dir / "eval1" / file);
    o.check(!first.empty(), std::string(file) + " empty");
    o.check(fixture::slurp(dir / "eval2" / file) == first,
            std::string(file) + " differs between runs");
    o.check(fixture::slurp(dir / "eval3" / file) == first,
            std::string(file) + " differs with 4 threads");
  }

  auto sample = [&](const std::string &run,
                    fixture::StubEndpoint::Options options) {
    fixture::StubEndpoint stub(std::move(options));
    RunConfig c;
    c.datasets = { manifest("uspto_mini"), manifest("biochem_mini") };
    c.out = dir / run;
    c.endpoint.url = stub.url();
    c.endpoint.n_samples = 7;
    c.endpoint.backoff_ms = 1;
    c.endpoint.max_in_flight = 3;
    cmd_sample(c);
    return fixture::slurp(dir / run / "predictions.jsonl");
  };
  const std::string first = sample("sample1", {});
  const std::string second = sample("sample2", {});
  fixture::StubEndpoint::Options flaky;
  flaky.malformed_first = 1;
  const std::string third = sample("sample3", flaky);
  o.check(first == second, "predictions differ between runs");
  o.check(first == third, "predictions differ after malformed replies");
  std::size_t prompts = 0;
  std::istringstream in(first);
  for (std::string line; std::getline(in, line);) {
    ++prompts;
    o.check(nlohmann::json::parse(line)["samples"].size() == 7,
            "wrong sample count: " + line);
  }
  o.check(prompts > 0, "no prompts sampled");
  o.detail = "evaluate reports identical across 3 runs; "
             + std::to_string(prompts)
             + " prompts x 7 samples identical across 3 stub runs";
  return o;
}

}  // namespace

int main() {
  logger().set_level(spdlog::level::err);
  const std::pair<const char *, Outcome (*)()> criteria[] = {
    { "canonicalization", canonicalization },
    { "validity", validity_suite },
    { "metric-contracts", metric_contracts },
    { "worked-cases", worked_cases },
    { "generator-accounting", generator_accounting },
    { "bpe", bpe },
    { "drfp", fingerprints },
    { "overlap", overlap_audit },
    { "determinism", determinism },
  };
  int failed = 0;
  int index = 0;
  for (const auto &[name, fn]: criteria) {
    ++index;
    Outcome o;
    const auto start = Clock::now();
    try {
      o = fn();
    } catch (const std::exception &e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.ok;
    std::printf("%s %d %s (%.1f s)\n", o.ok ? "PASS" : "FAIL", index, name,
                seconds_since(start));
    std::printf("    %s\n", o.detail.c_str());
    for (const std::string &p: o.problems)
      std::printf("    ! %s\n", p.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
