//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/harness/manifest.h"

#include <json.hpp>

#include "retrochem/util/hash.h"
#include "retrochem/util/io.h"

#ifndef RETROCHEM_VERSION
#define RETROCHEM_VERSION "0.0.0"
#endif

namespace retrochem {

namespace fs = std::filesystem;

std::string_view tool_version() {
  return RETROCHEM_VERSION;
}

RunManifest::RunManifest(std::string command, const RunConfig &config)
    : command_(std::move(command)), out_(config.out), seed_(config.seed),
      config_hash_(hex64(fnv1a64(config.canonical_json()))) { }

RunManifest::Timer::~Timer() {
  const std::chrono::duration<double> elapsed
      = std::chrono::steady_clock::now() - start_;
  manifest_.add_time(step_, elapsed.count());
}

void RunManifest::add_input(const std::string &name, std::size_t records,
                            std::size_t skipped) {
  inputs_[name] = { records, skipped };
}

void RunManifest::set_count(const std::string &key, std::int64_t value) {
  counts_[key] = value;
}

void RunManifest::add_time(const std::string &step, double seconds) {
  timings_.emplace_back(step, seconds);
}

void RunManifest::add_file(const fs::path &path) {
  const std::string content = read_file(path);
  std::error_code ec;
  fs::path shown = fs::relative(path, out_, ec);
  if (ec || shown.empty() || *shown.begin() == "..")
    shown = path;
  files_.push_back({ shown.generic_string(), content.size(),
                     hex64(fnv1a64(content)) });
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "retrochem";
  j["version"] = std::string(tool_version());
  j["command"] = command_;
  j["config_hash"] = config_hash_;
  j["seed"] = seed_;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto &[name, in]: inputs_)
    inputs[name] = { { "records", in.records }, { "skipped", in.skipped } };
  j["inputs"] = inputs;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto &[key, v]: counts_)
    counts[key] = v;
  j["counts"] = counts;
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  for (const auto &[step, s]: timings_)
    timings[step] = s;
  j["timings_s"] = timings;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const File &f: files_)
    files.push_back({ { "path", f.path }, { "bytes", f.bytes },
                      { "fnv1a64", f.hash } });
  j["files"] = files;
  return j.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace)
         + "\n";
}

fs::path RunManifest::write() const {
  const fs::path path = out_ / ("manifest-" + command_ + ".json");
  write_file_atomic(path, to_json());
  return path;
}

}  // namespace retrochem
