//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/instruct/templates.h"

#include <charconv>

#include "embedded_data.h"
#include "retrochem/util/io.h"

namespace retrochem {
namespace {

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || c == '_';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty()
         && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::string unescape_newlines(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == 'n') {
      out += '\n';
      ++i;
    } else if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == '\\') {
      out += '\\';
      ++i;
    } else {
      out += s[i];
    }
  }
  return out;
}

// Walks a pattern, calling text(piece) for literal text and name(id) for
// each placeholder.
template <class TextFn, class NameFn>
void scan(std::string_view pattern, TextFn text, NameFn name) {
  std::size_t i = 0;
  while (i < pattern.size()) {
    const char c = pattern[i];
    if (c == '{' && i + 1 < pattern.size() && pattern[i + 1] == '{') {
      text("{");
      i += 2;
    } else if (c == '}' && i + 1 < pattern.size() && pattern[i + 1] == '}') {
      text("}");
      i += 2;
    } else if (c == '{') {
      std::size_t j = i + 1;
      while (j < pattern.size() && is_name_char(pattern[j]))
        ++j;
      if (j == i + 1 || j >= pattern.size() || pattern[j] != '}')
        throw CatalogError("malformed placeholder at offset "
                           + std::to_string(i));
      name(pattern.substr(i + 1, j - i - 1));
      i = j + 1;
    } else if (c == '}') {
      throw CatalogError("stray '}' at offset " + std::to_string(i));
    } else {
      std::size_t j = i;
      while (j < pattern.size() && pattern[j] != '{' && pattern[j] != '}')
        ++j;
      text(pattern.substr(i, j - i));
      i = j;
    }
  }
}

void check_template(const Template &t) {
  if (t.prompt.empty() || t.completion.empty())
    throw CatalogError("template " + t.id + " has an empty pattern");
  const std::set<std::string> bound = bound_placeholders(t.task, t.subtask);
  if (bound.empty())
    throw CatalogError("template " + t.id + ": no subtask "
                       + std::to_string(t.subtask) + " for task "
                       + std::string(to_string(t.task)));
  for (const std::string *pattern: { &t.prompt, &t.completion }) {
    for (const std::string &name: placeholders(*pattern)) {
      if (!bound.count(name))
        throw CatalogError("template " + t.id + ": placeholder {" + name
                           + "} is not bound for this subtask");
    }
  }
}

}  // namespace

std::string_view to_string(Task task) {
  switch (task) {
  case Task::kRetro:
    return "retro";
  case Task::kForward:
    return "forward";
  case Task::kDesign:
    return "design";
  case Task::kDescription:
    return "description";
  case Task::kYield:
    return "yield";
  }
  return "unknown";
}

Task parse_task(std::string_view text) {
  for (Task t: { Task::kRetro, Task::kForward, Task::kDesign,
                 Task::kDescription, Task::kYield }) {
    if (to_string(t) == text)
      return t;
  }
  throw CatalogError("unknown task: " + std::string(text));
}

std::set<std::string> bound_placeholders(Task task, int subtask) {
  switch (task) {
  case Task::kRetro:
  case Task::kForward:
    if (subtask == 1 || subtask == 2)
      return { "reactants", "conditions", "products" };
    break;
  case Task::kDesign:
    if (subtask >= 1 && subtask <= 3)
      return { "reactants", "conditions", "products", "properties" };
    break;
  case Task::kYield:
    if (subtask == 1)
      return { "reactants", "conditions", "products", "yield" };
    break;
  case Task::kDescription:
    switch (subtask) {
    case 1:
    case 2:
    case 3:
    case 7:
    case 8:
    case 9:
      return { "name_zh", "name_en", "description" };
    case 4:
      return { "description", "iupac", "smiles" };
    case 5:
    case 6:
      return { "smiles", "iupac" };
    }
    break;
  }
  return {};
}

std::vector<std::string> placeholders(std::string_view pattern) {
  std::vector<std::string> names;
  scan(
      pattern, [](std::string_view) { },
      [&](std::string_view n) { names.emplace_back(n); });
  return names;
}

std::string render(std::string_view pattern,
                   const std::map<std::string, std::string> &values) {
  std::string out;
  scan(
      pattern, [&](std::string_view piece) { out += piece; },
      [&](std::string_view n) {
        const auto it = values.find(std::string(n));
        if (it == values.end())
          throw CatalogError("no value for placeholder {" + std::string(n)
                             + "}");
        out += it->second;
      });
  return out;
}

TemplateCatalog TemplateCatalog::parse(std::string_view text) {
  TemplateCatalog catalog;
  std::set<std::string, std::less<>> ids;
  std::map<std::string, std::string> fields;
  std::size_t block_line = 0;

  auto flush = [&]() {
    if (fields.empty())
      return;
    const std::string where = "block at line " + std::to_string(block_line);
    for (const char *key: { "template", "task", "subtask", "prompt",
                            "completion" }) {
      if (!fields.count(key))
        throw CatalogError(where + ": missing " + key);
    }
    Template t;
    t.id = fields["template"];
    t.task = parse_task(fields["task"]);
    const std::string &sub = fields["subtask"];
    const auto [end, ec] = std::from_chars(sub.data(), sub.data() + sub.size(),
                                           t.subtask);
    if (ec != std::errc() || end != sub.data() + sub.size())
      throw CatalogError(where + ": bad subtask '" + sub + "'");
    t.prompt = unescape_newlines(fields["prompt"]);
    t.completion = unescape_newlines(fields["completion"]);
    if (t.id.empty())
      throw CatalogError(where + ": empty template id");
    if (!ids.insert(t.id).second)
      throw CatalogError("duplicate template id " + t.id);
    check_template(t);
    catalog.templates_.push_back(std::move(t));
    fields.clear();
  };

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const std::string_view body = trim(line);
    if (body.empty()) {
      flush();
      return;
    }
    if (body.front() == '#')
      return;
    const std::size_t colon = body.find(':');
    if (colon == std::string_view::npos)
      throw CatalogError("line " + std::to_string(line_no)
                         + ": expected 'key: value'");
    const std::string key(trim(body.substr(0, colon)));
    if (fields.empty())
      block_line = line_no;
    if (!fields.emplace(key, trim(body.substr(colon + 1))).second)
      throw CatalogError("line " + std::to_string(line_no) + ": repeated key "
                         + key);
  });
  flush();
  return catalog;
}

TemplateCatalog TemplateCatalog::load(const std::filesystem::path &path) {
  return parse(read_file(path));
}

const TemplateCatalog &TemplateCatalog::builtin() {
  static const TemplateCatalog catalog = parse(embedded::template_catalog());
  return catalog;
}

std::vector<const Template *> TemplateCatalog::find(Task task,
                                                    int subtask) const {
  std::vector<const Template *> out;
  for (const Template &t: templates_) {
    if (t.task == task && t.subtask == subtask)
      out.push_back(&t);
  }
  return out;
}

const Template &TemplateCatalog::get(std::string_view id) const {
  for (const Template &t: templates_) {
    if (t.id == id)
      return t;
  }
  throw CatalogError("unknown template id " + std::string(id));
}

}  // namespace retrochem
