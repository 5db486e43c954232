//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_INSTRUCT_TEMPLATES_H_
#define RETROCHEM_INSTRUCT_TEMPLATES_H_

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace retrochem {

enum class Task {
  kRetro,
  kForward,
  kDesign,
  kDescription,
  kYield,
};

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

class CatalogError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Template {
  std::string id;
  Task task = Task::kRetro;
  int subtask = 1;
  std::string prompt;
  std::string completion;
};

// Placeholder names a (task, subtask) binds. Empty for unknown subtasks.
std::set<std::string> bound_placeholders(Task task, int subtask);

// Names used by a pattern; throws CatalogError on malformed braces.
std::vector<std::string> placeholders(std::string_view pattern);

// Replaces {name} with values; {{ and }} are literal braces. Throws
// CatalogError for a placeholder without a value.
std::string render(std::string_view pattern,
                   const std::map<std::string, std::string> &values);

// Templates in catalog order; see data/templates_en.txt for the format.
class TemplateCatalog {
public:
  static TemplateCatalog parse(std::string_view text);
  static TemplateCatalog load(const std::filesystem::path &path);
  // The shipped English catalog.
  static const TemplateCatalog &builtin();

  // Templates for (task, subtask) in catalog order; empty when none.
  std::vector<const Template *> find(Task task, int subtask) const;
  const Template &get(std::string_view id) const;
  std::size_t size() const { return templates_.size(); }
  const std::vector<Template> &templates() const { return templates_; }

private:
  std::vector<Template> templates_;
};

}  // namespace retrochem

#endif  // RETROCHEM_INSTRUCT_TEMPLATES_H_
