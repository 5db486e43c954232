//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_TESTS_FIXTURES_H_
#define RETROCHEM_TESTS_FIXTURES_H_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifndef RETROCHEM_TEST_DATA
#error "RETROCHEM_TEST_DATA must point at tests/data"
#endif

namespace retrochem::fixture {

inline std::filesystem::path data_path(const std::string &name) {
  return std::filesystem::path(RETROCHEM_TEST_DATA) / name;
}

inline std::string slurp(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> read_lines(const std::filesystem::path &path) {
  std::vector<std::string> out;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (!line.empty() && line[0] != '#')
      out.push_back(line);
  }
  return out;
}

inline std::vector<std::string> canonical_fixture() {
  return read_lines(data_path("canonical_fixture.smi"));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string &tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path()
            / ("retrochem-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const {
    return path_ / name;
  }

private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path &path,
                       const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace retrochem::fixture

#endif  // RETROCHEM_TESTS_FIXTURES_H_
