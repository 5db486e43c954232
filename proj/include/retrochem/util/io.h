//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_UTIL_IO_H_
#define RETROCHEM_UTIL_IO_H_

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace retrochem {

class IoError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path &path);

// Splits on '\n', dropping a trailing '\r' from each line.
template <class Fn>
void for_each_line(std::string_view text, Fn &&fn) {
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    fn(++line_no, line);
    start = end + 1;
  }
}

// Writes to "<path>.tmp.<pid>" and renames over `path` on commit(). An
// uncommitted writer removes its temporary file, so readers never observe
// a half-written output.
class AtomicWriter {
public:
  explicit AtomicWriter(std::filesystem::path path);
  ~AtomicWriter();

  AtomicWriter(const AtomicWriter &) = delete;
  AtomicWriter &operator=(const AtomicWriter &) = delete;

  std::ostream &stream() { return out_; }
  void commit();

  // Renames whatever was written so far to "<path>.partial" instead.
  void keep_partial();

private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  bool done_ = false;
};

void write_file_atomic(const std::filesystem::path &path,
                       std::string_view content);

}  // namespace retrochem

#endif  // RETROCHEM_UTIL_IO_H_
