//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "retrochem/harness/commands.h"
#include "retrochem/harness/config.h"
#include "retrochem/harness/manifest.h"
#include "retrochem/util/io.h"

namespace fs = std::filesystem;
using namespace retrochem;

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string stereo;
  std::string k;
  std::optional<unsigned> threads;
  std::vector<std::string> datasets;
};

RunConfig effective_config(const GlobalFlags &g) {
  RunConfig c = g.config.empty() ? RunConfig {} : load_config(g.config);
  if (g.seed)
    c.seed = *g.seed;
  if (!g.out.empty())
    c.out = g.out;
  if (!g.stereo.empty()) {
    try {
      c.stereo = parse_stereo_mode(g.stereo);
    } catch (const MetricError &e) {
      throw ConfigError(e.what());
    }
  }
  if (!g.k.empty())
    c.k = parse_k_list(g.k);
  if (g.threads)
    c.threads = *g.threads;
  if (!g.datasets.empty())
    c.datasets.assign(g.datasets.begin(), g.datasets.end());
  return c;
}

// Reads `path` (or stdin when empty) and hands the stream to fn.
template <class Fn>
void with_input(const std::string &path, Fn fn) {
  if (path.empty() || path == "-") {
    fn(std::cin);
    return;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path);
  fn(in);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app { "retrochem - retrosynthesis evaluation and instruction-data "
                 "toolkit" };
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "TOML run configuration");
  app.add_option("--seed", g.seed, "root seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--stereo", g.stereo, "aware or agnostic");
  app.add_option("-k", g.k, "comma-separated top-k values, e.g. 1,10,30");
  app.add_option("--threads", g.threads, "worker threads");
  app.add_option("--dataset", g.datasets, "dataset manifest (repeatable)");

  std::string input;
  auto *canon = app.add_subcommand("canonicalize",
                                   "canonical SMILES, one per input line");
  canon->add_option("input", input, "file (default stdin)");
  auto *validate = app.add_subcommand("validate",
                                      "parse and valence-check SMILES");
  validate->add_option("input", input, "file (default stdin)");

  std::string predictions;
  auto *evaluate = app.add_subcommand("evaluate", "score predictions");
  evaluate->add_option("--predictions", predictions, "predictions JSONL");

  std::string prompts, url;
  std::optional<int> n_samples;
  auto *sample = app.add_subcommand("sample", "collect samples from an endpoint");
  sample->add_option("--prompts", prompts, "prompts JSONL (id, prompt)");
  sample->add_option("--url", url, "endpoint url");
  sample->add_option("-n,--n-samples", n_samples, "samples per prompt");

  std::vector<std::string> meta;
  std::string catalog;
  std::optional<int> augment;
  std::optional<double> design_rate;
  auto *gen = app.add_subcommand("gen-instruct",
                                 "render instruction-tuning entries");
  gen->add_option("--meta", meta, "molecule metadata JSONL (repeatable)");
  gen->add_option("--catalog", catalog, "template catalog file");
  gen->add_option("--augment", augment, "shuffled copies per record");
  gen->add_option("--design-rate", design_rate,
                  "fraction of records given a design entry");

  std::string vocab_input, vocab_base;
  std::optional<long> merges, min_frequency;
  auto *train = app.add_subcommand("train-vocab", "learn BPE merges");
  train->add_option("--input", vocab_input, "corpus, one string per line");
  train->add_option("--base", vocab_base, "base vocabulary, one token per line");
  train->add_option("--merges", merges, "number of merges");
  train->add_option("--min-frequency", min_frequency,
                    "stop below this pair count");

  std::string table;
  auto *tokenize = app.add_subcommand("tokenize", "encode lines with a table");
  tokenize->add_option("--table", table, "merge table")->required();
  tokenize->add_option("input", input, "file (default stdin)");

  std::string overlap_a, overlap_b;
  auto *overlap_cmd = app.add_subcommand("overlap",
                                         "shared reactions between datasets");
  overlap_cmd->add_option("--a", overlap_a, "first dataset manifest");
  overlap_cmd->add_option("--b", overlap_b, "second dataset manifest");

  std::optional<int> radius, bits, knn;
  auto *fingerprint = app.add_subcommand("fingerprint",
                                         "reaction fingerprints and k-NN edges");
  fingerprint->add_option("--radius", radius, "substructure radius");
  fingerprint->add_option("--bits", bits, "fingerprint length");
  fingerprint->add_option("--knn", knn, "neighbors per reaction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitConfig;
  }

  return run_guarded([&]() {
    RunConfig c = effective_config(g);
    if (!predictions.empty()) {
      c.predictions_file = fs::path(predictions);
      c.predictions_from_endpoint = false;
    }
    if (!prompts.empty())
      c.prompts_file = fs::path(prompts);
    if (!url.empty())
      c.endpoint.url = url;
    if (n_samples)
      c.endpoint.n_samples = *n_samples;
    if (!meta.empty())
      c.instruct.meta.assign(meta.begin(), meta.end());
    if (!catalog.empty())
      c.instruct.catalog = fs::path(catalog);
    if (augment)
      c.instruct.augment = *augment;
    if (design_rate)
      c.instruct.design_rate = *design_rate;
    if (!vocab_input.empty())
      c.vocab.input = fs::path(vocab_input);
    if (!vocab_base.empty())
      c.vocab.base = fs::path(vocab_base);
    if (merges)
      c.vocab.merges = *merges;
    if (min_frequency)
      c.vocab.min_frequency = *min_frequency;
    if (radius)
      c.fingerprint.radius = *radius;
    if (bits)
      c.fingerprint.n_bits = *bits;
    if (knn)
      c.fingerprint.knn = *knn;
    c.validate();

    if (*canon) {
      with_input(input, [&](std::istream &in) {
        cmd_canonicalize(c, in, std::cout);
      });
    } else if (*validate) {
      with_input(input, [&](std::istream &in) {
        cmd_validate(c, in, std::cout);
      });
    } else if (*evaluate) {
      cmd_evaluate(c);
    } else if (*sample) {
      cmd_sample(c);
    } else if (*gen) {
      cmd_gen_instruct(c);
    } else if (*train) {
      cmd_train_vocab(c);
    } else if (*tokenize) {
      with_input(input, [&](std::istream &in) {
        cmd_tokenize(c, table, in, std::cout);
      });
    } else if (*overlap_cmd) {
      std::optional<fs::path> a, b;
      if (!overlap_a.empty())
        a = overlap_a;
      if (!overlap_b.empty())
        b = overlap_b;
      cmd_overlap(c, a, b);
    } else if (*fingerprint) {
      cmd_fingerprint(c);
    }
  });
}
