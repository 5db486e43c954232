//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/bpe/bpe.h"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "retrochem/smiles/element.h"
#include "retrochem/util/io.h"

namespace retrochem {
namespace {

constexpr std::string_view kHeader = "#chem-bpe v1";

bool is_cont(unsigned char c) {
  return (c & 0xc0) == 0x80;
}

// Length of the well-formed UTF-8 sequence at s[i], or 0.
std::size_t utf8_length(std::string_view s, std::size_t i) {
  const auto at = [&](std::size_t k) {
    return static_cast<unsigned char>(s[k]);
  };
  const unsigned char c = at(i);
  if (c < 0x80)
    return 1;
  std::size_t len;
  unsigned char lo = 0x80, hi = 0xbf;
  if (c >= 0xc2 && c <= 0xdf) {
    len = 2;
  } else if (c >= 0xe0 && c <= 0xef) {
    len = 3;
    if (c == 0xe0)
      lo = 0xa0;
    if (c == 0xed)
      hi = 0x9f;
  } else if (c >= 0xf0 && c <= 0xf4) {
    len = 4;
    if (c == 0xf0)
      lo = 0x90;
    if (c == 0xf4)
      hi = 0x8f;
  } else {
    return 0;
  }
  if (i + len > s.size())
    return 0;
  if (at(i + 1) < lo || at(i + 1) > hi)
    return 0;
  for (std::size_t k = 2; k < len; ++k) {
    if (!is_cont(at(i + k)))
      return 0;
  }
  return len;
}

// Merges every left-to-right occurrence of (left, right) in place.
// Returns the number of merges made.
std::size_t merge_pair(std::vector<std::string> &syms,
                       const std::string &left, const std::string &right) {
  std::size_t out = 0, merged = 0;
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
      syms[out++] = left + right;
      ++i;
      ++merged;
    } else {
      if (out != i)
        syms[out] = std::move(syms[i]);
      ++out;
    }
  }
  syms.resize(out);
  return merged;
}

// Applies merges by lowest rank first, restricted to ranks < limit.
void apply_merges(std::vector<std::string> &syms, const MergeTable &table,
                  int limit) {
  while (syms.size() > 1) {
    int best = -1;
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      const int r = table.rank(syms[i], syms[i + 1]);
      if (r >= 0 && r < limit && (best < 0 || r < best)) {
        best = r;
        at = i;
      }
    }
    if (best < 0)
      return;
    const std::string left = syms[at], right = syms[at + 1];
    merge_pair(syms, left, right);
  }
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r')
    s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string> split_symbols(std::string_view text) {
  std::vector<std::string> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t len = utf8_length(text, i);
    const std::size_t take = len == 0 ? 1 : len;
    out.emplace_back(text.substr(i, take));
    i += take;
  }
  return out;
}

const std::vector<std::string> &element_tokens() {
  static const std::vector<std::string> tokens = [] {
    std::vector<std::string> v;
    for (const Element &e: all_elements())
      v.emplace_back(e.symbol);
    return v;
  }();
  return tokens;
}

MergeTable::MergeTable(): MergeTable(element_tokens()) { }

MergeTable::MergeTable(const std::vector<std::string> &forced_tokens) {
  for (const std::string &token: forced_tokens) {
    if (token.empty())
      throw BpeError("empty forced token");
    if (!forced_tokens_.insert(token).second)
      continue;
    forced_order_.push_back(token);
    vocab_.insert(token);
    const std::vector<std::string> syms = split_symbols(token);
    std::string acc = syms.front();
    for (std::size_t i = 1; i < syms.size(); ++i) {
      if (rank(acc, syms[i]) < 0) {
        forced_.emplace_back(acc, syms[i]);
        index(forced_.back(), static_cast<int>(forced_.size()) - 1);
      }
      acc += syms[i];
    }
  }
}

void MergeTable::index(const TokenPair &pair, int r) {
  ranks_[pair.first][pair.second] = r;
}

void MergeTable::add_base_symbol(const std::string &symbol) {
  base_.insert(symbol);
  vocab_.insert(symbol);
}

void MergeTable::add_merge(TokenPair pair) {
  if (rank(pair.first, pair.second) >= 0)
    throw BpeError("duplicate merge " + escape_token(pair.first) + " "
                   + escape_token(pair.second));
  vocab_.insert(pair.first + pair.second);
  merges_.push_back(std::move(pair));
  index(merges_.back(), static_cast<int>(forced_.size() + merges_.size()) - 1);
}

int MergeTable::rank(const std::string &left, const std::string &right) const {
  const auto a = ranks_.find(left);
  if (a == ranks_.end())
    return -1;
  const auto b = a->second.find(right);
  return b == a->second.end() ? -1 : b->second;
}

std::string MergeTable::serialize() const {
  std::string out(kHeader);
  out += "\n[forced]\n";
  for (const std::string &t: forced_order_)
    out += escape_token(t) + '\n';
  out += "[base]\n";
  for (const std::string &t: base_)
    out += escape_token(t) + '\n';
  out += "[merges]\n";
  for (const auto &[l, r]: merges_)
    out += escape_token(l) + '\t' + escape_token(r) + '\n';
  return out;
}

MergeTable MergeTable::parse(std::string_view text) {
  enum class Block { kNone, kForced, kBase, kMerges } block = Block::kNone;
  std::vector<std::string> forced;
  std::vector<std::string> base;
  std::vector<TokenPair> merges;
  bool header = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const std::string_view line = trim_cr(raw);
    if (!header) {
      if (line != kHeader)
        throw BpeError("not a chem-bpe v1 table (line 1)");
      header = true;
      return;
    }
    if (line.empty())
      return;
    if (line == "[forced]") {
      block = Block::kForced;
    } else if (line == "[base]") {
      block = Block::kBase;
    } else if (line == "[merges]") {
      block = Block::kMerges;
    } else if (block == Block::kForced) {
      forced.push_back(unescape_token(line));
    } else if (block == Block::kBase) {
      base.push_back(unescape_token(line));
    } else if (block == Block::kMerges) {
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size())
        throw BpeError("line " + std::to_string(line_no)
                       + ": expected left<TAB>right");
      merges.emplace_back(unescape_token(line.substr(0, tab)),
                          unescape_token(line.substr(tab + 1)));
    } else {
      throw BpeError("line " + std::to_string(line_no)
                     + ": content outside a block");
    }
  });
  if (!header)
    throw BpeError("empty merge table");
  MergeTable table(forced);
  for (const std::string &s: base)
    table.add_base_symbol(s);
  for (TokenPair &m: merges)
    table.add_merge(std::move(m));
  return table;
}

MergeTable MergeTable::load(const std::filesystem::path &path) {
  return parse(read_file(path));
}

void MergeTable::save(const std::filesystem::path &path) const {
  write_file_atomic(path, serialize());
}

MergeTable train_bpe(std::span<const std::string> corpus,
                     const TrainOptions &options) {
  if (corpus.empty())
    throw BpeError("training corpus is empty");
  if (options.n_merges < 0)
    throw BpeError("n_merges must not be negative");

  MergeTable table;
  const int forced_limit = static_cast<int>(table.forced_merges().size());

  // Distinct strings with multiplicities; std::map keeps the order fixed.
  std::map<std::string, long> freq;
  for (const std::string &s: corpus)
    ++freq[s];

  std::vector<std::vector<std::string>> words;
  std::vector<long> counts;
  for (const auto &[text, n]: freq) {
    std::vector<std::string> syms = split_symbols(text);
    for (const std::string &s: syms)
      table.add_base_symbol(s);
    apply_merges(syms, table, forced_limit);
    words.push_back(std::move(syms));
    counts.push_back(n);
  }

  // Pair statistics, with an ordered set to find the best pair: highest
  // count first, then the smallest pair.
  std::map<TokenPair, long> pair_count;
  std::map<TokenPair, std::set<std::size_t>> where;
  std::set<std::pair<long, TokenPair>> ranked;  // (-count, pair)

  auto adjust = [&](const TokenPair &p, long delta, std::size_t word) {
    long &c = pair_count[p];
    if (c > 0)
      ranked.erase({ -c, p });
    c += delta;
    if (c > 0)
      ranked.insert({ -c, p });
    if (delta > 0)
      where[p].insert(word);
  };
  auto account = [&](std::size_t w, long sign) {
    const std::vector<std::string> &syms = words[w];
    for (std::size_t i = 0; i + 1 < syms.size(); ++i)
      adjust({ syms[i], syms[i + 1] }, sign * counts[w], w);
  };
  for (std::size_t w = 0; w < words.size(); ++w)
    account(w, +1);

  for (long m = 0; m < options.n_merges && !ranked.empty(); ++m) {
    const auto [neg, best] = *ranked.begin();
    if (static_cast<std::size_t>(-neg) < options.min_frequency)
      break;
    table.add_merge(best);
    const std::set<std::size_t> touched = where[best];
    for (std::size_t w: touched) {
      std::vector<std::string> &syms = words[w];
      bool present = false;
      for (std::size_t i = 0; i + 1 < syms.size() && !present; ++i)
        present = syms[i] == best.first && syms[i + 1] == best.second;
      if (!present)
        continue;
      account(w, -1);
      merge_pair(syms, best.first, best.second);
      account(w, +1);
    }
    where.erase(best);
  }
  return table;
}

std::vector<std::string> encode(std::string_view text,
                                const MergeTable &table) {
  std::vector<std::string> syms = split_symbols(text);
  apply_merges(syms, table, std::numeric_limits<int>::max());
  return syms;
}

std::string decode(std::span<const std::string> tokens) {
  std::string out;
  for (const std::string &t: tokens)
    out += t;
  return out;
}

VocabMerge merge_vocab(const std::set<std::string> &base,
                       const MergeTable &chem) {
  VocabMerge result;
  result.tokens = base;
  result.base_size = base.size();
  result.tokens.insert(chem.vocab().begin(), chem.vocab().end());
  result.added = result.tokens.size() - base.size();
  return result;
}

std::string escape_token(std::string_view token) {
  std::string out;
  std::size_t i = 0;
  while (i < token.size()) {
    const std::size_t len = utf8_length(token, i);
    if (len == 0) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\x%02x",
                    static_cast<unsigned char>(token[i]));
      out += buf;
      ++i;
      continue;
    }
    const char c = token[i];
    if (len == 1 && c == '\t')
      out += "\\t";
    else if (len == 1 && c == '\n')
      out += "\\n";
    else if (len == 1 && c == '\r')
      out += "\\r";
    else if (len == 1 && c == '\\')
      out += "\\\\";
    else
      out.append(token.substr(i, len));
    i += len;
  }
  return out;
}

std::string unescape_token(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (i + 1 >= text.size())
      throw BpeError("dangling escape in token");
    const char c = text[++i];
    switch (c) {
    case 't':
      out += '\t';
      break;
    case 'n':
      out += '\n';
      break;
    case 'r':
      out += '\r';
      break;
    case '\\':
      out += '\\';
      break;
    case 'x': {
      if (i + 2 >= text.size())
        throw BpeError("short \\x escape in token");
      const std::string hex(text.substr(i + 1, 2));
      if (hex.size() != 2
          || hex.find_first_not_of("0123456789abcdefABCDEF")
                 != std::string::npos)
        throw BpeError("bad \\x escape in token");
      out += static_cast<char>(std::stoi(hex, nullptr, 16));
      i += 2;
      break;
    }
    default:
      throw BpeError(std::string("unknown escape \\") + c);
    }
  }
  return out;
}

}  // namespace retrochem
