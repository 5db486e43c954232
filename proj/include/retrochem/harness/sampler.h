//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_HARNESS_SAMPLER_H_
#define RETROCHEM_HARNESS_SAMPLER_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "retrochem/harness/config.h"

namespace retrochem {

class EndpointError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PromptItem {
  std::string id;
  std::string prompt;
  // Other fields of the prompt line, copied into the output line.
  nlohmann::ordered_json passthrough = nlohmann::ordered_json::object();
};

// JSON lines with at least "id" and "prompt". Throws std::invalid_argument
// naming the line for malformed rows or duplicate ids.
std::vector<PromptItem> parse_prompts(std::string_view text);

std::string build_request(const EndpointConfig &endpoint,
                          std::string_view prompt, int n);

// Strings found at the configured path. Throws EndpointError when the path
// does not exist in a well-formed body.
std::vector<std::string> extract_samples(const nlohmann::json &body,
                                         std::string_view path);

struct SamplerStats {
  std::size_t requests = 0;
  std::size_t retries = 0;
  std::size_t max_in_flight_seen = 0;
};

struct SampleRun {
  // One entry per prompt; empty when the prompt was not completed.
  std::vector<std::optional<std::vector<std::string>>> samples;
  SamplerStats stats;
  // Set when the run stopped on a permanent endpoint failure.
  std::optional<std::string> error;
};

// Collects endpoint.n_samples strings per prompt with at most
// endpoint.max_in_flight requests outstanding. Transient failures
// (connection errors, HTTP 429 and 5xx, unparsable bodies) are retried
// with exponential backoff up to max_retries times per request.
SampleRun sample_prompts(const EndpointConfig &endpoint,
                         std::span<const PromptItem> prompts);

// Output lines {"id", passthrough..., "samples"} for completed prompts, in
// prompt order.
std::string render_predictions(std::span<const PromptItem> prompts,
                               const SampleRun &run);

}  // namespace retrochem

#endif  // RETROCHEM_HARNESS_SAMPLER_H_
