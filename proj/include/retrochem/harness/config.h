//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_HARNESS_CONFIG_H_
#define RETROCHEM_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "retrochem/metrics/metrics.h"

namespace retrochem {

class ConfigError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char *kDefaultApiKeyEnv = "RETROCHEM_API_KEY";

struct EndpointConfig {
  std::string url;
  std::map<std::string, std::string> headers;
  // {prompt} becomes a JSON string literal; {n}, {temperature} and
  // {max_tokens} become numbers. Other text, braces included, is sent as is.
  std::string request_template
      = R"({"prompt": {prompt}, "n": {n}, "temperature": {temperature}, )"
        R"("max_tokens": {max_tokens}})";
  // Dot-separated path into the response JSON; "*" walks every element of
  // an array and digits index into one.
  std::string response_path = "samples";
  int n_samples = 10;
  double temperature = 1.0;
  int max_tokens = 512;
  double timeout_s = 60.0;
  int max_retries = 3;
  int max_in_flight = 4;
  int backoff_ms = 500;
  // The credential is read from this variable and sent in api_key_header
  // as api_key_prefix + value. It is never logged or written anywhere.
  std::string api_key_env = kDefaultApiKeyEnv;
  std::string api_key_header = "Authorization";
  std::string api_key_prefix = "Bearer ";
};

struct InstructConfig {
  std::optional<std::filesystem::path> catalog;
  std::vector<std::filesystem::path> meta;
  int augment = 1;
  double design_rate = 1.0;
  std::vector<std::string> tasks { "retro", "forward", "design", "yield",
                                   "description" };
};

struct VocabConfig {
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> base;
  long merges = 1000;
  long min_frequency = 2;
};

struct FingerprintConfig {
  int radius = 3;
  int n_bits = 2048;
  int knn = 5;
};

// Single TOML file. Top level: seed, out, stereo, k, metrics, threads,
// datasets (manifest paths); tables [predictions] (file | endpoint = true),
// [endpoint], [instruct], [vocab], [fingerprint]. Relative paths resolve
// against the config file's directory.
struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";
  StereoMode stereo = StereoMode::kAware;
  std::vector<std::size_t> k { 1, 10 };
  std::vector<Metric> metrics { Metric::kMaxFrag, Metric::kCoverage,
                                Metric::kIntersection, Metric::kValidity };
  unsigned threads = 1;
  std::vector<std::filesystem::path> datasets;

  std::optional<std::filesystem::path> predictions_file;
  bool predictions_from_endpoint = false;
  std::optional<std::filesystem::path> prompts_file;
  EndpointConfig endpoint;

  InstructConfig instruct;
  VocabConfig vocab;
  FingerprintConfig fingerprint;

  // Checks the invariants every command relies on; throws ConfigError.
  void validate() const;
  // Stable JSON rendering of every field, used for the manifest hash.
  std::string canonical_json() const;
};

RunConfig parse_config(std::string_view text,
                       const std::filesystem::path &base_dir);
RunConfig load_config(const std::filesystem::path &path);

// "1,10,30" -> {1, 10, 30}; throws ConfigError.
std::vector<std::size_t> parse_k_list(std::string_view text);

}  // namespace retrochem

#endif  // RETROCHEM_HARNESS_CONFIG_H_
