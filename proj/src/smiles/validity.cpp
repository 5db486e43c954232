//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/smiles/validity.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>
#include <utility>

#include "retrochem/smiles/element.h"
#include "retrochem/smiles/parser.h"
#include "embedded_data.h"

namespace retrochem {
namespace {

// Edmonds' blossom algorithm for maximum matching in a general graph.
class BlossomMatcher {
public:
  explicit BlossomMatcher(const std::vector<std::vector<int>> &graph)
      : graph_(graph), n_(static_cast<int>(graph.size())), match_(n_, -1),
        parent_(n_), base_(n_), used_(n_), blossom_(n_) { }

  const std::vector<int> &solve() {
    // Greedy seed; augmenting paths fix the rest.
    for (int v = 0; v < n_; ++v) {
      if (match_[v] >= 0)
        continue;
      for (int u: graph_[v]) {
        if (match_[u] < 0) {
          match_[u] = v;
          match_[v] = u;
          break;
        }
      }
    }
    for (int v = 0; v < n_; ++v) {
      if (match_[v] >= 0)
        continue;
      int end = find_path(v);
      while (end >= 0) {
        const int pv = parent_[end];
        const int ppv = match_[pv];
        match_[end] = pv;
        match_[pv] = end;
        end = ppv;
      }
    }
    return match_;
  }

private:
  int lca(int a, int b) {
    std::vector<bool> seen(n_, false);
    while (true) {
      a = base_[a];
      seen[a] = true;
      if (match_[a] < 0)
        break;
      a = parent_[match_[a]];
    }
    while (true) {
      b = base_[b];
      if (seen[b])
        return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base_[v] != b) {
      blossom_[base_[v]] = blossom_[base_[match_[v]]] = true;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  int find_path(int root) {
    std::fill(used_.begin(), used_.end(), false);
    std::fill(parent_.begin(), parent_.end(), -1);
    std::iota(base_.begin(), base_.end(), 0);
    used_[root] = true;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int to: graph_[v]) {
        if (base_[v] == base_[to] || match_[v] == to)
          continue;
        if (to == root || (match_[to] >= 0 && parent_[match_[to]] >= 0)) {
          const int cur = lca(v, to);
          std::fill(blossom_.begin(), blossom_.end(), false);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n_; ++i) {
            if (blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = true;
                q.push(i);
              }
            }
          }
        } else if (parent_[to] < 0) {
          parent_[to] = v;
          if (match_[to] < 0)
            return to;
          used_[match_[to]] = true;
          q.push(match_[to]);
        }
      }
    }
    return -1;
  }

  const std::vector<std::vector<int>> &graph_;
  int n_;
  std::vector<int> match_, parent_, base_;
  std::vector<bool> used_, blossom_;
};

// Size of the smallest ring through `bond`, or 0 when it is acyclic.
// `ring` receives that ring's atoms.
int smallest_ring(const Molecule &mol, int bond, std::vector<int> &ring) {
  const Bond &b = mol.bond(bond);
  std::vector<int> prev(mol.num_atoms(), -2);
  std::queue<int> q;
  prev[b.begin] = -1;
  q.push(b.begin);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    if (v == b.end)
      break;
    for (const Neighbor &nb: mol.neighbors(v)) {
      if (nb.bond == bond || prev[nb.atom] != -2)
        continue;
      prev[nb.atom] = v;
      q.push(nb.atom);
    }
  }
  if (prev[b.end] == -2)
    return 0;
  ring.clear();
  for (int v = b.end; v != -1; v = prev[v])
    ring.push_back(v);
  return static_cast<int>(ring.size());
}

bool needs_pi_bond(const Molecule &mol, int atom, const ValenceTable &table) {
  const Atom &a = mol.atom(atom);
  const int sum = bond_order_sum(mol, atom);
  if (!a.explicit_hydrogens) {
    for (int v: organic_valences(a.element)) {
      if (v >= sum)
        return v - sum >= 1;
    }
    return false;
  }
  const int used = sum + *a.explicit_hydrogens;
  for (int v: table.allowed(a.element, a.charge)) {
    if (v >= used)
      return v - used >= 1;
  }
  return false;
}

}  // namespace

ValenceTable ValenceTable::parse(std::string_view text) {
  ValenceTable table;
  std::istringstream in { std::string(text) };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    std::string symbol, valences, rule;
    if (!(fields >> symbol))
      continue;
    if (!(fields >> valences >> rule))
      throw ValenceTableError("valence table line " + std::to_string(line_no)
                              + ": expected <element> <valences> <rule>");
    const int z = find_element(symbol);
    if (z == 0)
      throw ValenceTableError("valence table line " + std::to_string(line_no)
                              + ": unknown element " + symbol);
    Entry entry;
    std::istringstream list(valences);
    std::string item;
    while (std::getline(list, item, ',')) {
      char *end = nullptr;
      const long v = std::strtol(item.c_str(), &end, 10);
      if (item.empty() || *end != '\0' || v < 0)
        throw ValenceTableError("valence table line "
                                + std::to_string(line_no)
                                + ": bad valence '" + item + "'");
      entry.valences.push_back(static_cast<int>(v));
    }
    std::sort(entry.valences.begin(), entry.valences.end());
    if (rule == "plus")
      entry.rule = ChargeRule::kPlus;
    else if (rule == "minus")
      entry.rule = ChargeRule::kMinus;
    else if (rule == "abs")
      entry.rule = ChargeRule::kAbs;
    else
      throw ValenceTableError("valence table line " + std::to_string(line_no)
                              + ": unknown charge rule " + rule);
    table.entries_[z] = std::move(entry);
  }
  return table;
}

ValenceTable ValenceTable::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ValenceTableError("cannot read valence table " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

const ValenceTable &ValenceTable::default_table() {
  static const ValenceTable kDefault = parse(embedded::valence_table());
  return kDefault;
}

std::vector<int> ValenceTable::allowed(int element, int charge) const {
  auto it = entries_.find(element);
  if (it == entries_.end())
    return {};
  std::vector<int> out;
  for (int v: it->second.valences) {
    int adjusted = v;
    switch (it->second.rule) {
    case ChargeRule::kPlus:
      adjusted = v + charge;
      break;
    case ChargeRule::kMinus:
      adjusted = v - charge;
      break;
    case ChargeRule::kAbs:
      adjusted = v - std::abs(charge);
      break;
    }
    if (adjusted >= 0)
      out.push_back(adjusted);
  }
  std::sort(out.begin(), out.end());
  if (out.empty())
    out.push_back(0);
  return out;
}

std::optional<int> ValenceTable::max_valence(int element, int charge) const {
  if (!checks(element))
    return std::nullopt;
  return allowed(element, charge).back();
}

Molecule kekulize(const Molecule &mol, const ValenceTable &table) {
  const int n = mol.num_atoms();
  bool any_aromatic = false;
  for (int i = 0; i < n; ++i) {
    if (!mol.atom(i).aromatic)
      continue;
    any_aromatic = true;
    if (!mol.in_ring(i))
      throw KekulizeError(KekulizeError::Kind::kAcyclicAromatic, i,
                          "aromatic atom " + std::to_string(i)
                              + " is not in a ring");
  }
  for (int b = 0; b < mol.num_bonds(); ++b) {
    if (mol.bond(b).order == BondOrder::kAromatic)
      any_aromatic = true;
  }
  if (!any_aromatic)
    return mol;

  std::vector<int> ring;
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    if (bond.order != BondOrder::kAromatic)
      continue;
    if (!mol.atom(bond.begin).aromatic || !mol.atom(bond.end).aromatic)
      throw KekulizeError(KekulizeError::Kind::kNoMatching, bond.begin,
                          "aromatic bond " + std::to_string(b)
                              + " joins a non-aromatic atom");
    const int size = smallest_ring(mol, b, ring);
    if (size == 0)
      throw KekulizeError(KekulizeError::Kind::kAcyclicAromatic, bond.begin,
                          "aromatic bond " + std::to_string(b)
                              + " is not in a ring");
    const bool all_aromatic = std::all_of(
        ring.begin(), ring.end(), [&](int a) { return mol.atom(a).aromatic; });
    if (all_aromatic && (size < 5 || size > 7))
      throw KekulizeError(KekulizeError::Kind::kRingSize, bond.begin,
                          "aromatic ring of size " + std::to_string(size)
                              + " at atom " + std::to_string(bond.begin));
  }

  std::vector<int> pi_index(n, -1);
  std::vector<int> pi_atoms;
  for (int i = 0; i < n; ++i) {
    if (mol.atom(i).aromatic && needs_pi_bond(mol, i, table)) {
      pi_index[i] = static_cast<int>(pi_atoms.size());
      pi_atoms.push_back(i);
    }
  }
  std::vector<std::vector<int>> graph(pi_atoms.size());
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    if (bond.order != BondOrder::kAromatic)
      continue;
    const int u = pi_index[bond.begin];
    const int v = pi_index[bond.end];
    if (u >= 0 && v >= 0) {
      graph[u].push_back(v);
      graph[v].push_back(u);
    }
  }
  const std::vector<int> match = BlossomMatcher(graph).solve();
  for (std::size_t i = 0; i < pi_atoms.size(); ++i) {
    if (match[i] < 0)
      throw KekulizeError(KekulizeError::Kind::kNoMatching, pi_atoms[i],
                          "no Kekule structure: atom "
                              + std::to_string(pi_atoms[i])
                              + " cannot receive a double bond");
  }

  std::vector<Atom> atoms(mol.atoms().begin(), mol.atoms().end());
  std::vector<Bond> bonds(mol.bonds().begin(), mol.bonds().end());
  for (Bond &bond: bonds) {
    if (bond.order != BondOrder::kAromatic)
      continue;
    const int u = pi_index[bond.begin];
    const int v = pi_index[bond.end];
    bond.order = u >= 0 && v >= 0 && match[u] == v ? BondOrder::kDouble
                                                   : BondOrder::kSingle;
  }
  for (Atom &a: atoms)
    a.aromatic = false;

  Molecule result(atoms, bonds,
                  { mol.tetrahedral_centers().begin(),
                    mol.tetrahedral_centers().end() },
                  { mol.double_bond_stereo().begin(),
                    mol.double_bond_stereo().end() });
  bool changed = false;
  for (int i = 0; i < n; ++i) {
    if (!atoms[i].explicit_hydrogens
        && result.hydrogen_count(i) != mol.hydrogen_count(i)) {
      atoms[i].explicit_hydrogens = mol.hydrogen_count(i);
      changed = true;
    }
  }
  if (!changed)
    return result;
  return Molecule(std::move(atoms), std::move(bonds),
                  { mol.tetrahedral_centers().begin(),
                    mol.tetrahedral_centers().end() },
                  { mol.double_bond_stereo().begin(),
                    mol.double_bond_stereo().end() });
}

std::string_view to_string(ValidityReason reason) {
  switch (reason) {
  case ValidityReason::kValenceExceeded:
    return "valence exceeded";
  case ValidityReason::kKekulizationFailed:
    return "kekulization failed";
  case ValidityReason::kAromaticAcyclic:
    return "aromatic atom acyclic";
  case ValidityReason::kParseError:
    return "parse error";
  }
  return "unknown";
}

ValidityReport check_validity(const Molecule &mol, const ValenceTable &table) {
  ValidityReport report;
  const Molecule *checked = &mol;
  Molecule kekule;
  bool kekulized = false;
  try {
    kekule = kekulize(mol, table);
    checked = &kekule;
    kekulized = true;
  } catch (const KekulizeError &e) {
    report.failures.push_back(
        { e.atom(),
          e.kind() == KekulizeError::Kind::kAcyclicAromatic
              ? ValidityReason::kAromaticAcyclic
              : ValidityReason::kKekulizationFailed,
          e.what() });
  }

  for (int i = 0; i < checked->num_atoms(); ++i) {
    const Atom &a = checked->atom(i);
    if (!kekulized && a.aromatic)
      continue;
    int total = 0;
    for (const Neighbor &nb: checked->neighbors(i))
      total += static_cast<int>(checked->bond(nb.bond).order);
    if (a.explicit_hydrogens)
      total += *a.explicit_hydrogens;
    const std::optional<int> max = table.max_valence(a.element, a.charge);
    if (max && total > *max) {
      report.failures.push_back(
          { i, ValidityReason::kValenceExceeded,
            std::string(element(a.element).symbol) + " at atom "
                + std::to_string(i) + " has valence " + std::to_string(total)
                + " (max " + std::to_string(*max) + ")" });
    }
  }
  report.valid = report.failures.empty();
  return report;
}

ValidityReport validate_smiles(std::string_view smiles,
                               const ValenceTable &table) {
  try {
    return check_validity(parse_smiles(smiles), table);
  } catch (const SmilesError &e) {
    ValidityReport report;
    report.valid = false;
    report.failures.push_back({ -1, ValidityReason::kParseError, e.what() });
    return report;
  }
}

}  // namespace retrochem
