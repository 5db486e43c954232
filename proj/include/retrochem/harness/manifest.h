//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_HARNESS_MANIFEST_H_
#define RETROCHEM_HARNESS_MANIFEST_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "retrochem/harness/config.h"

namespace retrochem {

std::string_view tool_version();

// Written next to a command's outputs as manifest-<command>.json.
// Timings are the only field that varies between identical runs.
class RunManifest {
public:
  RunManifest(std::string command, const RunConfig &config);

  void add_input(const std::string &name, std::size_t records,
                 std::size_t skipped = 0);
  void set_count(const std::string &key, std::int64_t value);
  void add_time(const std::string &step, double seconds);
  // Records size and FNV-1a 64 hash of a file that has been written.
  void add_file(const std::filesystem::path &path);

  const std::string &config_hash() const { return config_hash_; }
  std::string to_json() const;
  std::filesystem::path write() const;

  // Adds the elapsed time under `step` when destroyed.
  class Timer {
  public:
    Timer(RunManifest &manifest, std::string step)
        : manifest_(manifest), step_(std::move(step)),
          start_(std::chrono::steady_clock::now()) { }
    ~Timer();
    Timer(const Timer &) = delete;
    Timer &operator=(const Timer &) = delete;

  private:
    RunManifest &manifest_;
    std::string step_;
    std::chrono::steady_clock::time_point start_;
  };
  Timer time(std::string step) { return Timer(*this, std::move(step)); }

private:
  struct Input {
    std::size_t records;
    std::size_t skipped;
  };
  struct File {
    std::string path;
    std::uintmax_t bytes;
    std::string hash;
  };

  std::string command_;
  std::filesystem::path out_;
  std::uint64_t seed_;
  std::string config_hash_;
  std::map<std::string, Input> inputs_;
  std::map<std::string, std::int64_t> counts_;
  std::vector<std::pair<std::string, double>> timings_;
  std::vector<File> files_;
};

}  // namespace retrochem

#endif  // RETROCHEM_HARNESS_MANIFEST_H_
