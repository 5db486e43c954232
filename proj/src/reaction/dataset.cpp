//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/reaction/dataset.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <variant>

#include <json.hpp>
#include <toml.hpp>

#include "retrochem/util/csv.h"
#include "retrochem/util/io.h"
#include "retrochem/util/log.h"

namespace retrochem {
namespace {

using Json = nlohmann::ordered_json;

// A cell is either one string (possibly dot-joined) or a list of SMILES.
using Cell = std::variant<std::string, std::vector<std::string>>;

std::vector<Species> species_from(const Cell &cell) {
  if (const auto *s = std::get_if<std::string>(&cell))
    return parse_species_list(*s);
  std::vector<Species> out;
  for (const std::string &s: std::get<std::vector<std::string>>(cell)) {
    std::vector<Species> part = parse_species_list(s);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string cell_text(const Cell &cell) {
  if (const auto *s = std::get_if<std::string>(&cell))
    return *s;
  std::string out;
  for (const std::string &s: std::get<std::vector<std::string>>(cell)) {
    if (!out.empty())
      out += '.';
    out += s;
  }
  return out;
}

class RowBuilder {
public:
  RowBuilder(const DatasetManifest &manifest, IngestResult &result)
      : manifest_(manifest), result_(result) { }

  void warn(std::size_t row, const std::string &message) {
    std::string text = manifest_.name + " row " + std::to_string(row) + ": "
                       + message;
    logger().warn("{}", text);
    result_.warnings.push_back(std::move(text));
  }

  // `get` returns nullptr when the field is missing from this row.
  template <class Get>
  void add(std::size_t row, Get &&get) {
    ++result_.rows;
    const DatasetSchema &schema = manifest_.schema;
    ReactionRecord rec;
    try {
      if (!schema.reaction.empty()) {
        const Cell *cell = get(schema.reaction);
        rec = parse_reaction(cell ? cell_text(*cell) : std::string());
      } else {
        const Cell *r = get(schema.reactants);
        const Cell *p = get(schema.products);
        if (r)
          rec.reactants = species_from(*r);
        if (p)
          rec.products = species_from(*p);
        if (!schema.conditions.empty()) {
          if (const Cell *c = get(schema.conditions))
            rec.conditions = species_from(*c);
        }
        if (rec.reactants.empty() || rec.products.empty())
          throw ReactionError("empty reactant or product field");
      }
    } catch (const ReactionError &e) {
      warn(row, std::string("skipped: ") + e.what());
      ++result_.skipped;
      return;
    }
    for (const auto *list: { &rec.reactants, &rec.conditions, &rec.products }) {
      for (const Species &s: *list) {
        if (!s.valid) {
          warn(row, "skipped: invalid molecule " + s.smiles);
          ++result_.skipped;
          return;
        }
      }
    }

    rec.source = manifest_.name;
    rec.record_id = manifest_.name + ":" + std::to_string(row);
    if (!schema.id.empty()) {
      if (const Cell *c = get(schema.id); c && !cell_text(*c).empty())
        rec.record_id = cell_text(*c);
    }
    if (!schema.yield.empty()) {
      if (const Cell *c = get(schema.yield))
        rec.yield_percent = parse_yield(row, cell_text(*c));
    }
    result_.records.push_back(std::move(rec));
  }

private:
  std::optional<double> parse_yield(std::size_t row, std::string text) {
    while (!text.empty() && (text.back() == '%' || text.back() == ' '))
      text.pop_back();
    while (!text.empty() && text.front() == ' ')
      text.erase(text.begin());
    if (text.empty())
      return std::nullopt;
    double value = 0;
    const auto [ptr, ec]
        = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      warn(row, "ignored non-numeric yield '" + text + "'");
      return std::nullopt;
    }
    if (value < 0 || value > 100) {
      const double clamped = std::clamp(value, 0.0, 100.0);
      warn(row, "yield " + text + " clamped to "
                    + std::to_string(static_cast<int>(clamped)));
      value = clamped;
    }
    return value;
  }

  const DatasetManifest &manifest_;
  IngestResult &result_;
};

std::vector<std::string> schema_fields(const DatasetSchema &s) {
  std::vector<std::string> out;
  for (const std::string *f: { &s.reaction, &s.reactants, &s.conditions,
                               &s.products, &s.id, &s.yield }) {
    if (!f->empty())
      out.push_back(*f);
  }
  return out;
}

void ingest_csv(const DatasetManifest &manifest, std::string_view text,
                IngestResult &result) {
  std::vector<CsvRow> rows;
  try {
    rows = parse_csv(text);
  } catch (const CsvError &e) {
    throw DatasetError(manifest.path.string() + ": " + e.what());
  }
  if (rows.empty())
    throw DatasetError(manifest.path.string() + ": missing CSV header");
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i)
    column.emplace(rows[0].fields[i], i);
  for (const std::string &f: schema_fields(manifest.schema)) {
    if (!column.count(f))
      throw DatasetError(manifest.path.string() + ": column '" + f
                         + "' not found in header");
  }

  RowBuilder builder(manifest, result);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow &row = rows[r];
    std::map<std::string, Cell> cells;
    for (const auto &[name, idx]: column) {
      if (idx < row.fields.size())
        cells.emplace(name, row.fields[idx]);
    }
    builder.add(row.line, [&](const std::string &name) -> const Cell * {
      auto it = cells.find(name);
      return it == cells.end() ? nullptr : &it->second;
    });
  }
}

void ingest_jsonl(const DatasetManifest &manifest, std::string_view text,
                  IngestResult &result) {
  RowBuilder builder(manifest, result);
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.find_first_not_of(" \t") == std::string_view::npos)
      return;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const Json::parse_error &e) {
      ++result.rows;
      ++result.skipped;
      builder.warn(line_no, std::string("skipped: malformed JSON: ")
                                + e.what());
      return;
    }
    std::map<std::string, Cell> cells;
    if (obj.is_object()) {
      for (const auto &[key, value]: obj.items()) {
        if (value.is_string()) {
          cells.emplace(key, value.get<std::string>());
        } else if (value.is_number()) {
          cells.emplace(key, value.dump());
        } else if (value.is_array()) {
          std::vector<std::string> list;
          for (const auto &v: value) {
            if (v.is_string())
              list.push_back(v.get<std::string>());
          }
          cells.emplace(key, std::move(list));
        }
      }
    }
    builder.add(line_no, [&](const std::string &name) -> const Cell * {
      auto it = cells.find(name);
      return it == cells.end() ? nullptr : &it->second;
    });
  });
}

std::vector<std::string> string_list(const Json &value) {
  std::vector<std::string> out;
  if (value.is_string()) {
    out.push_back(value.get<std::string>());
  } else if (value.is_array()) {
    for (const auto &v: value)
      out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

bool DatasetManifest::matches(std::string_view label) const {
  return label == name
         || std::find(aliases.begin(), aliases.end(), label) != aliases.end();
}

DatasetManifest DatasetManifest::parse(std::string_view text,
                                       const std::filesystem::path &base_dir) {
  toml::table table;
  try {
    table = toml::parse(text);
  } catch (const toml::parse_error &e) {
    throw ManifestError(std::string("manifest: ") + e.what());
  }
  DatasetManifest m;
  m.name = table["name"].value_or(std::string());
  if (m.name.empty())
    throw ManifestError("manifest: missing 'name'");
  if (const toml::array *aliases = table["aliases"].as_array()) {
    for (const auto &a: *aliases) {
      if (auto s = a.value<std::string>())
        m.aliases.push_back(*s);
    }
  }
  const std::string path = table["path"].value_or(std::string());
  if (path.empty())
    throw ManifestError("manifest " + m.name + ": missing 'path'");
  m.path = std::filesystem::path(path);
  if (m.path.is_relative())
    m.path = base_dir / m.path;

  const std::string format = table["format"].value_or(std::string());
  if (format == "csv")
    m.format = DatasetFormat::kCsv;
  else if (format == "jsonl")
    m.format = DatasetFormat::kJsonl;
  else
    throw ManifestError("manifest " + m.name + ": format must be csv or jsonl");

  if (auto count = table["count"].value<std::int64_t>()) {
    if (*count < 0)
      throw ManifestError("manifest " + m.name + ": negative count");
    m.count = static_cast<std::size_t>(*count);
  }

  const toml::table *cols = table["columns"].as_table();
  if (cols == nullptr)
    throw ManifestError("manifest " + m.name + ": missing [columns]");
  auto col = [&](const char *key) {
    return (*cols)[key].value_or(std::string());
  };
  m.schema.reaction = col("reaction");
  m.schema.reactants = col("reactants");
  m.schema.conditions = col("conditions");
  m.schema.products = col("products");
  m.schema.id = col("id");
  m.schema.yield = col("yield");
  const bool split = !m.schema.reactants.empty() && !m.schema.products.empty();
  if (m.schema.reaction.empty() && !split)
    throw ManifestError("manifest " + m.name
                        + ": columns must map 'reaction' or both "
                          "'reactants' and 'products'");
  return m;
}

DatasetManifest DatasetManifest::load(const std::filesystem::path &path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError &e) {
    throw ManifestError(e.what());
  }
  return parse(text, path.parent_path());
}

IngestResult ingest_dataset(const DatasetManifest &manifest) {
  std::string text;
  try {
    text = read_file(manifest.path);
  } catch (const IoError &e) {
    throw DatasetError(e.what());
  }
  IngestResult result;
  if (manifest.format == DatasetFormat::kCsv)
    ingest_csv(manifest, text, result);
  else
    ingest_jsonl(manifest, text, result);
  if (manifest.count && *manifest.count != result.records.size()) {
    std::string text = manifest.name + ": ingested "
                       + std::to_string(result.records.size())
                       + " records, manifest expects "
                       + std::to_string(*manifest.count);
    logger().warn("{}", text);
    result.warnings.push_back(std::move(text));
  }
  return result;
}

std::string serialize_record(const ReactionRecord &rec) {
  auto list = [](const std::vector<Species> &v) {
    Json arr = Json::array();
    for (const Species &s: v)
      arr.push_back(s.smiles);
    return arr;
  };
  Json obj;
  obj["id"] = rec.record_id;
  obj["source"] = rec.source;
  obj["reactants"] = list(rec.reactants);
  obj["conditions"] = list(rec.conditions);
  obj["products"] = list(rec.products);
  obj["yield"] = rec.yield_percent ? Json(*rec.yield_percent) : Json(nullptr);
  return obj.dump();
}

ReactionRecord parse_record_json(std::string_view line) {
  Json obj;
  try {
    obj = Json::parse(line);
  } catch (const Json::parse_error &e) {
    throw ReactionError(std::string("malformed record JSON: ") + e.what());
  }
  if (!obj.is_object())
    throw ReactionError("record JSON must be an object");
  ReactionRecord rec;
  try {
    auto species = [&](const char *key) {
      std::vector<Species> out;
      if (obj.contains(key)) {
        for (const std::string &s: string_list(obj[key])) {
          std::vector<Species> part = parse_species_list(s);
          out.insert(out.end(), part.begin(), part.end());
        }
      }
      return out;
    };
    rec.reactants = species("reactants");
    rec.conditions = species("conditions");
    rec.products = species("products");
    if (obj.contains("id"))
      rec.record_id = obj["id"].get<std::string>();
    if (obj.contains("source"))
      rec.source = obj["source"].get<std::string>();
    if (obj.contains("yield") && obj["yield"].is_number())
      rec.yield_percent = obj["yield"].get<double>();
  } catch (const Json::exception &e) {
    throw ReactionError(std::string("bad record field: ") + e.what());
  }
  if (rec.reactants.empty() || rec.products.empty())
    throw ReactionError("record " + rec.record_id
                        + " lacks reactants or products");
  return rec;
}

void write_records(std::ostream &out, std::span<const ReactionRecord> recs) {
  for (const ReactionRecord &r: recs)
    out << serialize_record(r) << '\n';
}

IngestResult read_records(const std::filesystem::path &path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError &e) {
    throw DatasetError(e.what());
  }
  IngestResult result;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.find_first_not_of(" \t") == std::string_view::npos)
      return;
    ++result.rows;
    auto warn = [&](const std::string &why) {
      std::string msg = path.filename().string() + " line "
                        + std::to_string(line_no) + ": " + why;
      logger().warn("{}", msg);
      result.warnings.push_back(std::move(msg));
      ++result.skipped;
    };
    try {
      ReactionRecord rec = parse_record_json(line);
      if (!rec.all_valid()) {
        warn("skipped: invalid molecule in " + rec.reaction_smiles());
        return;
      }
      result.records.push_back(std::move(rec));
    } catch (const ReactionError &e) {
      warn(std::string("skipped: ") + e.what());
    }
  });
  return result;
}

}  // namespace retrochem
