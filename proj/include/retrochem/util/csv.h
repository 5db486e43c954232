//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_UTIL_CSV_H_
#define RETROCHEM_UTIL_CSV_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace retrochem {

class CsvError: public std::runtime_error {
public:
  CsvError(const std::string &message, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) { }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct CsvRow {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180: comma separated, double-quoted fields may hold commas, quotes
// ("") and newlines. Blank lines are skipped.
std::vector<CsvRow> parse_csv(std::string_view text);

std::string csv_escape(std::string_view field);

}  // namespace retrochem

#endif  // RETROCHEM_UTIL_CSV_H_
