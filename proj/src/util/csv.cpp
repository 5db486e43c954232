//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/util/csv.h"

namespace retrochem {

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool any = false;
    while (true) {
      if (i < n && text[i] == '"') {
        // Quoted field.
        const std::size_t open_line = line;
        ++i;
        while (true) {
          if (i >= n)
            throw CsvError("unterminated quoted field", open_line);
          const char c = text[i++];
          if (c == '"') {
            if (i < n && text[i] == '"') {
              field += '"';
              ++i;
              continue;
            }
            break;
          }
          if (c == '\n')
            ++line;
          field += c;
        }
        any = true;
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          throw CsvError("unexpected character after closing quote", line);
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          field += text[i++];
        any = any || !field.empty();
      }
      row.fields.push_back(std::move(field));
      field.clear();
      if (i < n && text[i] == ',') {
        ++i;
        any = true;
        continue;
      }
      break;
    }
    if (i < n && text[i] == '\r')
      ++i;
    if (i < n && text[i] == '\n') {
      ++i;
      ++line;
    }
    if (any)
      rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char c: field) {
    if (c == '"')
      out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace retrochem
