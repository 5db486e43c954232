//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_BPE_BPE_H_
#define RETROCHEM_BPE_BPE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace retrochem {

class BpeError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using TokenPair = std::pair<std::string, std::string>;

// Splits into UTF-8 characters. A byte that does not start a well-formed
// sequence becomes a one-byte token, so concatenating the pieces always
// gives back the input.
std::vector<std::string> split_symbols(std::string_view text);

// The 118 element symbols in atomic-number order.
const std::vector<std::string> &element_tokens();

class MergeTable {
public:
  // Only the forced element merges.
  MergeTable();
  // Each forced token becomes a chain of left-folded merges.
  explicit MergeTable(const std::vector<std::string> &forced_tokens);

  // Forced merges come first; learned merges follow in training order.
  const std::vector<TokenPair> &forced_merges() const { return forced_; }
  const std::vector<TokenPair> &merges() const { return merges_; }
  const std::set<std::string> &forced_tokens() const { return forced_tokens_; }
  const std::set<std::string> &vocab() const { return vocab_; }

  void add_base_symbol(const std::string &symbol);
  void add_merge(TokenPair pair);

  // Rank in the combined forced-then-learned order, or -1.
  int rank(const std::string &left, const std::string &right) const;

  std::string serialize() const;
  static MergeTable parse(std::string_view text);
  static MergeTable load(const std::filesystem::path &path);
  void save(const std::filesystem::path &path) const;

private:
  void index(const TokenPair &pair, int rank);

  std::vector<TokenPair> forced_;
  std::vector<TokenPair> merges_;
  std::vector<std::string> forced_order_;
  std::set<std::string> forced_tokens_;
  std::set<std::string> base_;
  std::set<std::string> vocab_;
  std::map<std::string, std::map<std::string, int, std::less<>>, std::less<>>
      ranks_;
};

struct TrainOptions {
  long n_merges = 1000;
  // Stop once the best pair is seen fewer times than this.
  std::size_t min_frequency = 1;
};

// Greedy most-frequent-pair merging; ties go to the lexicographically
// smallest (left, right). Throws BpeError for an empty corpus or a
// negative merge count.
MergeTable train_bpe(std::span<const std::string> corpus,
                     const TrainOptions &options);

// Repeatedly merges the adjacent pair of lowest rank.
std::vector<std::string> encode(std::string_view text,
                                const MergeTable &table);
std::string decode(std::span<const std::string> tokens);

struct VocabMerge {
  std::set<std::string> tokens;
  std::size_t base_size = 0;
  std::size_t added = 0;  // chemical tokens not already in the base
};

VocabMerge merge_vocab(const std::set<std::string> &base,
                       const MergeTable &chem);

// Escaping used by the table file and token listings: \t \n \r \\ and
// \xHH for bytes outside well-formed UTF-8.
std::string escape_token(std::string_view token);
std::string unescape_token(std::string_view text);

}  // namespace retrochem

#endif  // RETROCHEM_BPE_BPE_H_
