//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/harness/commands.h"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "retrochem/bpe/bpe.h"
#include "retrochem/harness/manifest.h"
#include "retrochem/harness/sampler.h"
#include "retrochem/instruct/instruct.h"
#include "retrochem/rxnfp/rxnfp.h"
#include "retrochem/smiles/canonical.h"
#include "retrochem/smiles/parser.h"
#include "retrochem/smiles/validity.h"
#include "retrochem/util/csv.h"
#include "retrochem/util/io.h"
#include "retrochem/util/log.h"
#include "retrochem/util/parallel.h"

namespace retrochem {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string dump_line(const Json &j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

void ensure_out(const RunConfig &config) {
  std::error_code ec;
  fs::create_directories(config.out, ec);
  const fs::path probe = config.out / ".retrochem-write-probe";
  std::ofstream f(probe);
  if (ec || !f)
    throw ConfigError("output directory " + config.out.string()
                      + " is not writable");
  f.close();
  fs::remove(probe, ec);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

std::string read_stream(std::istream &in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(RunManifest &manifest, const fs::path &path,
                  std::string_view content) {
  write_file_atomic(path, content);
  manifest.add_file(path);
}

void log_warnings(const std::vector<std::string> &warnings) {
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < warnings.size() && i < kShown; ++i)
    logger().warn("{}", warnings[i]);
  if (warnings.size() > kShown)
    logger().warn("... {} more warnings", warnings.size() - kShown);
}

std::vector<LoadedDataset> require_datasets(const RunConfig &config) {
  if (config.datasets.empty())
    throw ConfigError("no datasets configured");
  return load_datasets(config.datasets);
}

const TemplateCatalog &catalog_for(const RunConfig &config,
                                   std::optional<TemplateCatalog> &storage) {
  if (!config.instruct.catalog)
    return TemplateCatalog::builtin();
  try {
    storage = TemplateCatalog::load(*config.instruct.catalog);
  } catch (const IoError &e) {
    throw ConfigError(e.what());
  }
  return *storage;
}

std::string product_key_of(std::string_view smiles, StereoMode mode) {
  ReactionRecord rec;
  rec.products = parse_species_list(smiles);
  if (rec.products.empty())
    throw ReactionError("empty product");
  return product_key(rec, mode == StereoMode::kAware);
}

}  // namespace

int run_guarded(const std::function<void()> &fn) {
  try {
    fn();
    return kExitOk;
  } catch (const ConfigError &e) {
    logger().error("config error: {}", e.what());
    return kExitConfig;
  } catch (const CatalogError &e) {
    logger().error("template catalog error: {}", e.what());
    return kExitConfig;
  } catch (const EndpointError &e) {
    logger().error("endpoint failure: {}", e.what());
    return kExitEndpoint;
  } catch (const DataError &e) {
    logger().error("input data error: {}", e.what());
    return kExitData;
  } catch (const ManifestError &e) {
    logger().error("input data error: {}", e.what());
    return kExitData;
  } catch (const DatasetError &e) {
    logger().error("input data error: {}", e.what());
    return kExitData;
  } catch (const CsvError &e) {
    logger().error("input data error: {}", e.what());
    return kExitData;
  } catch (const ReactionError &e) {
    logger().error("input data error: {}", e.what());
    return kExitData;
  } catch (const SmilesError &e) {
    logger().error("input data error: {}", e.what());
    return kExitData;
  } catch (const BpeError &e) {
    logger().error("input data error: {}", e.what());
    return kExitData;
  } catch (const FingerprintError &e) {
    logger().error("input data error: {}", e.what());
    return kExitData;
  } catch (const IoError &e) {
    logger().error("input data error: {}", e.what());
    return kExitData;
  } catch (const std::invalid_argument &e) {
    logger().error("input data error: {}", e.what());
    return kExitData;
  } catch (const std::exception &e) {
    logger().error("{}", e.what());
    return kExitFailure;
  }
}

std::vector<LoadedDataset> load_datasets(
    const std::vector<fs::path> &manifests) {
  std::vector<LoadedDataset> out;
  std::set<std::string> names;
  for (const fs::path &p: manifests) {
    LoadedDataset d { DatasetManifest::load(p), {} };
    if (!names.insert(d.manifest.name).second)
      throw ConfigError("dataset name " + d.manifest.name
                        + " is used by two manifests");
    d.ingest = ingest_dataset(d.manifest);
    log_warnings(d.ingest.warnings);
    logger().info("{}: {} records ({} skipped)", d.manifest.name,
                  d.ingest.records.size(), d.ingest.skipped);
    out.push_back(std::move(d));
  }
  return out;
}

PredictionTable read_predictions(const fs::path &path, StereoMode mode) {
  PredictionTable table;
  const std::string text = read_file(path);
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty())
      return;
    const std::string where = path.filename().string() + " line "
                              + std::to_string(line_no);
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw DataError(where + ": not a JSON object");
    const auto product = j.find("product");
    if (product == j.end() || !product->is_string())
      throw DataError(where + ": missing string 'product'");
    const auto samples = j.find("samples");
    if (samples == j.end() || !samples->is_array())
      throw DataError(where + ": missing array 'samples'");
    std::vector<std::string> raw;
    for (const Json &s: *samples) {
      if (!s.is_string())
        throw DataError(where + ": samples must be strings");
      raw.push_back(s.get<std::string>());
    }
    std::string dataset;
    if (const auto d = j.find("dataset"); d != j.end() && !d->is_null()) {
      if (!d->is_string())
        throw DataError(where + ": 'dataset' must be a string");
      dataset = d->get<std::string>();
    }
    std::string key;
    try {
      key = product_key_of(product->get<std::string>(), mode);
    } catch (const std::exception &e) {
      throw DataError(where + ": bad product: " + e.what());
    }
    if (!table.emplace(std::make_pair(dataset, key), std::move(raw)).second)
      throw DataError(where + ": second prediction line for product " + key);
  });
  return table;
}

std::string build_retro_prompts(const std::vector<LoadedDataset> &datasets,
                                StereoMode mode) {
  const std::vector<const Template *> templates
      = TemplateCatalog::builtin().find(Task::kRetro, 1);
  std::string out;
  for (const LoadedDataset &d: datasets) {
    std::size_t n = 0;
    for (const auto &[key, recs]:
         group_by_product(d.ingest.records, mode == StereoMode::kAware)) {
      Json j;
      j["id"] = d.manifest.name + ":" + std::to_string(++n);
      j["dataset"] = d.manifest.name;
      j["product"] = key;
      j["prompt"] = render(templates.front()->prompt,
                           { { "products", key },
                             { "reactants", "" },
                             { "conditions", "" } });
      out += dump_line(j) + '\n';
    }
  }
  return out;
}

void cmd_canonicalize(const RunConfig &config, std::istream &in,
                      std::ostream &out) {
  ensure_out(config);
  RunManifest manifest("canonicalize", config);
  const std::string text = read_stream(in);
  const CanonicalOptions options { config.stereo == StereoMode::kAware, true };
  std::int64_t lines = 0, failed = 0;
  {
    auto timer = manifest.time("canonicalize");
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
      ++lines;
      const std::string_view smiles = trim(line);
      if (smiles.empty()) {
        out << '\n';
        return;
      }
      try {
        out << canonical_smiles(smiles, options) << '\n';
      } catch (const std::exception &e) {
        ++failed;
        logger().warn("line {}: {}", line_no, e.what());
        out << '\n';
      }
    });
  }
  manifest.set_count("lines", lines);
  manifest.set_count("failed", failed);
  manifest.write();
}

void cmd_validate(const RunConfig &config, std::istream &in,
                  std::ostream &out) {
  ensure_out(config);
  RunManifest manifest("validate", config);
  const std::string text = read_stream(in);
  std::int64_t lines = 0, invalid = 0;
  for_each_line(text, [&](std::size_t, std::string_view line) {
    const std::string_view smiles = trim(line);
    if (smiles.empty())
      return;
    ++lines;
    const ValidityReport report = validate_smiles(smiles);
    out << smiles << '\t' << (report.valid ? "valid" : "invalid");
    if (!report.valid) {
      ++invalid;
      out << '\t';
      for (std::size_t i = 0; i < report.failures.size(); ++i) {
        const ValidityFailure &f = report.failures[i];
        out << (i ? "; " : "") << to_string(f.reason);
        if (!f.detail.empty())
          out << ": " << f.detail;
      }
    }
    out << '\n';
  });
  manifest.set_count("molecules", lines);
  manifest.set_count("invalid", invalid);
  manifest.write();
}

void cmd_evaluate(const RunConfig &config) {
  ensure_out(config);
  RunManifest manifest("evaluate", config);
  std::vector<LoadedDataset> datasets;
  {
    auto timer = manifest.time("ingest");
    datasets = require_datasets(config);
  }
  for (const LoadedDataset &d: datasets)
    manifest.add_input(d.manifest.name, d.ingest.records.size(),
                       d.ingest.skipped);

  fs::path predictions_path;
  if (config.predictions_from_endpoint) {
    cmd_sample(config);
    predictions_path = config.out / "predictions.jsonl";
  } else if (config.predictions_file) {
    predictions_path = *config.predictions_file;
  } else {
    throw ConfigError("evaluate needs a predictions file or an endpoint");
  }

  const StereoMode mode = config.stereo;
  PredictionTable table;
  {
    auto timer = manifest.time("read_predictions");
    table = read_predictions(predictions_path, mode);
  }

  struct Scored {
    std::string name;
    std::vector<PredictionSet> sets;
  };
  std::vector<Scored> scored;
  {
    auto timer = manifest.time("parse_predictions");
    std::vector<std::string> missing;
    for (const LoadedDataset &d: datasets) {
      Scored s { d.manifest.name, {} };
      std::vector<const std::vector<std::string> *> raw;
      std::vector<const std::vector<ReactionRecord> *> truth;
      const auto groups = group_by_product(d.ingest.records,
                                           mode == StereoMode::kAware);
      for (const auto &[key, recs]: groups) {
        const std::vector<std::string> *found = nullptr;
        std::vector<std::string> labels { d.manifest.name, "" };
        labels.insert(labels.end(), d.manifest.aliases.begin(),
                      d.manifest.aliases.end());
        for (const std::string &label: labels) {
          const auto it = table.find({ label, key });
          if (it != table.end()) {
            found = &it->second;
            break;
          }
        }
        if (!found) {
          missing.push_back(d.manifest.name + ":" + key);
          continue;
        }
        PredictionSet set;
        set.product_id = key;
        set.product = key;
        s.sets.push_back(std::move(set));
        raw.push_back(found);
        truth.push_back(&recs);
      }
      // Parsing and canonicalizing samples dominates; each product is
      // independent.
      parallel_for(s.sets.size(), config.threads, [&](std::size_t i) {
        for (const std::string &r: *raw[i])
          s.sets[i].samples.push_back(parse_prediction(r, mode));
        for (const ReactionRecord &rec: *truth[i])
          s.sets[i].pathways.push_back(make_pathway(rec, mode));
      });
      scored.push_back(std::move(s));
    }
    if (!missing.empty()) {
      std::string list;
      for (std::size_t i = 0; i < missing.size() && i < 10; ++i)
        list += (i ? ", " : "") + missing[i];
      if (missing.size() > 10)
        list += ", ...";
      throw DataError("missing predictions for " + std::to_string(missing.size())
                      + " product(s): " + list);
    }
  }

  std::vector<DatasetScore> scores;
  std::string audit;
  {
    auto timer = manifest.time("score");
    const std::set<Metric> wanted(config.metrics.begin(), config.metrics.end());
    std::vector<std::size_t> ks = config.k;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    for (std::size_t k: ks) {
      for (const Scored &s: scored) {
        DatasetScore score = score_dataset(s.name, s.sets, k);
        if (!wanted.count(Metric::kMaxFrag))
          score.maxfrag = {};
        if (!wanted.count(Metric::kCoverage))
          score.coverage = {};
        if (!wanted.count(Metric::kIntersection))
          score.intersection = {};
        if (!wanted.count(Metric::kValidity))
          score.validity = {};
        scores.push_back(std::move(score));
      }
    }
    for (const Scored &s: scored)
      audit += render_audit(s.name, s.sets);
  }
  const ReportNotes notes { mode };
  write_output(manifest, config.out / "report.md",
               render_markdown(scores, notes));
  write_output(manifest, config.out / "report.json",
               render_json(scores, notes));
  write_output(manifest, config.out / "audit.jsonl", audit);
  std::int64_t products = 0;
  for (const Scored &s: scored)
    products += static_cast<std::int64_t>(s.sets.size());
  manifest.set_count("products", products);
  manifest.write();
}

void cmd_sample(const RunConfig &config) {
  ensure_out(config);
  RunManifest manifest("sample", config);
  if (config.endpoint.url.empty())
    throw ConfigError("sample needs [endpoint] url");

  std::vector<PromptItem> prompts;
  if (config.prompts_file) {
    prompts = parse_prompts(read_file(*config.prompts_file));
    manifest.add_input("prompts", prompts.size());
  } else {
    const std::vector<LoadedDataset> datasets = require_datasets(config);
    for (const LoadedDataset &d: datasets)
      manifest.add_input(d.manifest.name, d.ingest.records.size(),
                         d.ingest.skipped);
    prompts = parse_prompts(build_retro_prompts(datasets, config.stereo));
  }

  SampleRun run;
  {
    auto timer = manifest.time("sample");
    run = sample_prompts(config.endpoint, prompts);
  }
  const fs::path path = config.out / "predictions.jsonl";
  std::size_t completed = 0;
  for (const auto &s: run.samples)
    completed += s.has_value();
  manifest.set_count("prompts", static_cast<std::int64_t>(prompts.size()));
  manifest.set_count("completed", static_cast<std::int64_t>(completed));
  manifest.set_count("samples_per_prompt", config.endpoint.n_samples);
  manifest.set_count("requests", static_cast<std::int64_t>(run.stats.requests));
  manifest.set_count("retries", static_cast<std::int64_t>(run.stats.retries));
  manifest.set_count("max_in_flight_seen",
                     static_cast<std::int64_t>(run.stats.max_in_flight_seen));

  AtomicWriter writer(path);
  writer.stream() << render_predictions(prompts, run);
  if (run.error) {
    writer.keep_partial();
    manifest.add_file(fs::path(path.string() + ".partial"));
    manifest.write();
    throw EndpointError(*run.error);
  }
  writer.commit();
  manifest.add_file(path);
  manifest.write();
}

void cmd_gen_instruct(const RunConfig &config) {
  ensure_out(config);
  RunManifest manifest("gen-instruct", config);
  std::optional<TemplateCatalog> storage;
  const TemplateCatalog &catalog = catalog_for(config, storage);

  CorpusOptions options;
  options.root_seed = config.seed;
  options.augment_copies = config.instruct.augment;
  options.design_rate = config.instruct.design_rate;
  options.threads = config.threads;
  options.retro = options.forward = options.design = options.yield
      = options.description = false;
  for (const std::string &t: config.instruct.tasks) {
    Task task;
    try {
      task = parse_task(t);
    } catch (const CatalogError &) {
      throw ConfigError("unknown instruct task '" + t + "'");
    }
    switch (task) {
    case Task::kRetro:
      options.retro = true;
      break;
    case Task::kForward:
      options.forward = true;
      break;
    case Task::kDesign:
      options.design = true;
      break;
    case Task::kDescription:
      options.description = true;
      break;
    case Task::kYield:
      options.yield = true;
      break;
    }
  }

  std::vector<ReactionRecord> records;
  for (LoadedDataset &d: load_datasets(config.datasets)) {
    manifest.add_input(d.manifest.name, d.ingest.records.size(),
                       d.ingest.skipped);
    for (ReactionRecord &r: d.ingest.records)
      records.push_back(std::move(r));
  }
  std::vector<MoleculeMeta> metas;
  for (const fs::path &p: config.instruct.meta) {
    const std::string text = read_file(p);
    std::size_t n = 0;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
      if (trim(line).empty())
        return;
      try {
        metas.push_back(parse_meta_json(line));
      } catch (const std::invalid_argument &e) {
        throw DataError(p.filename().string() + " line "
                        + std::to_string(line_no) + ": " + e.what());
      }
      if (metas.back().id.empty())
        metas.back().id = p.stem().string() + ":" + std::to_string(line_no);
      ++n;
    });
    manifest.add_input(p.filename().string(), n);
  }
  if (records.empty() && metas.empty())
    throw ConfigError("gen-instruct needs datasets or [instruct] meta files");

  Corpus corpus;
  {
    auto timer = manifest.time("generate");
    corpus = generate_corpus(records, metas, catalog,
                             DescriptorRegistry::builtin(), options);
  }
  log_warnings(corpus.warnings);
  std::string text;
  for (const InstructionEntry &e: corpus.entries)
    text += to_json(e) + '\n';
  write_output(manifest, config.out / "instruct.jsonl", text);
  for (const auto &[key, n]: corpus.counts)
    manifest.set_count(key, static_cast<std::int64_t>(n));
  manifest.set_count("entries", static_cast<std::int64_t>(corpus.entries.size()));
  manifest.set_count("warnings",
                     static_cast<std::int64_t>(corpus.warnings.size()));
  manifest.write();
}

void cmd_train_vocab(const RunConfig &config) {
  ensure_out(config);
  RunManifest manifest("train-vocab", config);
  std::vector<std::string> corpus;
  if (config.vocab.input) {
    const std::string text = read_file(*config.vocab.input);
    for_each_line(text, [&](std::size_t, std::string_view line) {
      if (!line.empty())
        corpus.emplace_back(line);
    });
    manifest.add_input(config.vocab.input->filename().string(), corpus.size());
  } else {
    for (const LoadedDataset &d: require_datasets(config)) {
      manifest.add_input(d.manifest.name, d.ingest.records.size(),
                         d.ingest.skipped);
      for (const ReactionRecord &r: d.ingest.records)
        corpus.push_back(r.reaction_smiles());
    }
  }
  if (corpus.empty())
    throw DataError("vocabulary corpus is empty");

  TrainOptions options;
  options.n_merges = config.vocab.merges;
  options.min_frequency = static_cast<std::size_t>(config.vocab.min_frequency);
  MergeTable table;
  {
    auto timer = manifest.time("train");
    table = train_bpe(corpus, options);
  }
  const fs::path table_path = config.out / "chem_bpe.txt";
  table.save(table_path);
  manifest.add_file(table_path);

  std::set<std::string> base;
  if (config.vocab.base) {
    const std::string text = read_file(*config.vocab.base);
    for_each_line(text, [&](std::size_t, std::string_view line) {
      if (!line.empty())
        base.insert(unescape_token(line));
    });
  }
  const VocabMerge merged = merge_vocab(base, table);
  Json report;
  report["corpus_strings"] = corpus.size();
  report["merges_requested"] = config.vocab.merges;
  report["merges_learned"] = table.merges().size();
  report["forced_tokens"] = table.forced_tokens().size();
  report["chem_vocab_size"] = table.vocab().size();
  report["base_vocab_size"] = merged.base_size;
  report["added_tokens"] = merged.added;
  report["merged_vocab_size"] = merged.tokens.size();
  write_output(manifest, config.out / "vocab_report.json",
               report.dump(2) + "\n");
  manifest.set_count("merges", static_cast<std::int64_t>(table.merges().size()));
  manifest.set_count("added_tokens", static_cast<std::int64_t>(merged.added));
  logger().info("vocabulary: {} merges, {} tokens added to a base of {}",
                table.merges().size(), merged.added, merged.base_size);
  manifest.write();
}

void cmd_tokenize(const RunConfig &config, const fs::path &table_path,
                  std::istream &in, std::ostream &out) {
  ensure_out(config);
  RunManifest manifest("tokenize", config);
  const MergeTable table = MergeTable::load(table_path);
  const std::string text = read_stream(in);
  std::int64_t lines = 0, tokens = 0;
  for_each_line(text, [&](std::size_t, std::string_view line) {
    Json arr = Json::array();
    for (const std::string &t: encode(line, table)) {
      arr.push_back(escape_token(t));
      ++tokens;
    }
    out << dump_line(arr) << '\n';
    ++lines;
  });
  manifest.set_count("lines", lines);
  manifest.set_count("tokens", tokens);
  manifest.write();
}

void cmd_overlap(const RunConfig &config, std::optional<fs::path> a,
                 std::optional<fs::path> b) {
  ensure_out(config);
  RunManifest manifest("overlap", config);
  if (!a) {
    if (config.datasets.empty())
      throw ConfigError("overlap needs two datasets");
    a = config.datasets[0];
    if (!b && config.datasets.size() > 1)
      b = config.datasets[1];
  }
  if (!b)
    b = a;
  std::vector<LoadedDataset> loaded = load_datasets({ *a });
  if (*b == *a) {
    loaded.push_back(loaded.front());
  } else {
    for (LoadedDataset &d: load_datasets({ *b }))
      loaded.push_back(std::move(d));
  }
  const LoadedDataset &da = loaded[0];
  const LoadedDataset &db = loaded[1];
  manifest.add_input(da.manifest.name, da.ingest.records.size(),
                     da.ingest.skipped);
  manifest.add_input(db.manifest.name, db.ingest.records.size(),
                     db.ingest.skipped);

  const bool stereo = config.stereo == StereoMode::kAware;
  Json report;
  report["a"] = da.manifest.name;
  report["b"] = db.manifest.name;
  report["stereo"] = std::string(to_string(config.stereo));
  std::string md = "| Mode | " + da.manifest.name + " distinct | "
                   + db.manifest.name + " distinct | Overlap |\n"
                   "|---|---:|---:|---:|\n";
  for (KeyMode mode: { KeyMode::kWithConditions, KeyMode::kWithoutConditions }) {
    const char *name = mode == KeyMode::kWithConditions ? "with_conditions"
                                                        : "without_conditions";
    OverlapResult r;
    std::size_t distinct_a = 0, distinct_b = 0;
    {
      auto timer = manifest.time(std::string("overlap_") + name);
      r = overlap(da.ingest.records, db.ingest.records, mode, stereo);
      distinct_a = distinct_key_count(da.ingest.records, mode, stereo);
      distinct_b = distinct_key_count(db.ingest.records, mode, stereo);
    }
    report[name] = { { "distinct_a", distinct_a },
                     { "distinct_b", distinct_b },
                     { "overlap", r.count },
                     { "keys", r.keys } };
    md += std::string("| ") + name + " | " + std::to_string(distinct_a) + " | "
          + std::to_string(distinct_b) + " | " + std::to_string(r.count)
          + " |\n";
    manifest.set_count(std::string("overlap_") + name,
                       static_cast<std::int64_t>(r.count));
  }
  write_output(manifest, config.out / "overlap.json", report.dump(2) + "\n");
  write_output(manifest, config.out / "overlap.md", md);
  manifest.write();
}

void cmd_fingerprint(const RunConfig &config) {
  ensure_out(config);
  RunManifest manifest("fingerprint", config);
  std::vector<ReactionRecord> records;
  std::vector<std::string> ids;
  for (LoadedDataset &d: require_datasets(config)) {
    manifest.add_input(d.manifest.name, d.ingest.records.size(),
                       d.ingest.skipped);
    for (ReactionRecord &r: d.ingest.records) {
      ids.push_back(r.record_id);
      records.push_back(std::move(r));
    }
  }
  const FingerprintOptions options { config.fingerprint.radius,
                                     config.fingerprint.n_bits };
  std::vector<ReactionFingerprint> fps;
  {
    auto timer = manifest.time("fingerprint");
    fps = drfp_all(records, options, config.threads);
  }
  write_output(manifest, config.out / "fingerprints.rxfp",
               write_fingerprints(fps));
  write_output(manifest, config.out / "fingerprints.jsonl",
               fingerprints_jsonl(fps, ids));
  std::vector<Edge> edges;
  if (fps.size() >= 2) {
    auto timer = manifest.time("knn");
    const std::size_t k = std::min<std::size_t>(config.fingerprint.knn,
                                                fps.size() - 1);
    edges = knn_edges(fps, k, config.threads);
  }
  write_output(manifest, config.out / "edges.csv", edges_csv(edges));
  manifest.set_count("fingerprints", static_cast<std::int64_t>(fps.size()));
  manifest.set_count("edges", static_cast<std::int64_t>(edges.size()));
  manifest.write();
}

}  // namespace retrochem
