//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <map>

#include "retrochem/bpe/bpe.h"
#include "retrochem/util/random.h"
#include "support/fixtures.h"

using namespace retrochem;

namespace {

std::vector<std::string> corpus(std::initializer_list<const char *> items) {
  return { items.begin(), items.end() };
}

// Most frequent adjacent pair over the symbol sequences, ties to the
// smallest pair; counts weighted by string multiplicity.
TokenPair oracle_first_merge(const std::vector<std::string> &strings,
                             const MergeTable &forced) {
  std::map<TokenPair, long> counts;
  for (const std::string &s: strings) {
    const std::vector<std::string> t = encode(s, forced);
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
      ++counts[{ t[i], t[i + 1] }];
  }
  TokenPair best;
  long best_count = -1;
  for (const auto &[pair, n]: counts) {
    if (n > best_count) {
      best = pair;
      best_count = n;
    }
  }
  return best;
}

}  // namespace

TEST(Symbols, Utf8AndRawBytes) {
  EXPECT_EQ(split_symbols("C阿l"),
            (std::vector<std::string> { "C", "阿", "l" }));
  const std::string bad = std::string("a\xff") + "\xe4\xb8";
  const auto pieces = split_symbols(bad);
  EXPECT_EQ(pieces.size(), 4u);
  std::string joined;
  for (const auto &p: pieces)
    joined += p;
  EXPECT_EQ(joined, bad);
}

TEST(Elements, AllSymbolsForced) {
  ASSERT_EQ(element_tokens().size(), 118u);
  EXPECT_EQ(element_tokens().front(), "H");
  EXPECT_EQ(element_tokens().back(), "Og");
  const MergeTable t;
  for (const std::string &e: element_tokens())
    EXPECT_EQ(encode(e, t), std::vector<std::string> { e }) << e;
}

TEST(Train, FirstMergeOnSmallCorpus) {
  const auto c = corpus({ "CCO", "CCO", "CCN" });
  const MergeTable t = train_bpe(c, { 1, 1 });
  ASSERT_EQ(t.merges().size(), 1u);
  EXPECT_EQ(t.merges()[0], TokenPair("C", "C"));
}

TEST(Train, MatchesPairCountOracle) {
  const auto mols = fixture::canonical_fixture();
  const MergeTable forced;
  const MergeTable t = train_bpe(mols, { 1, 1 });
  ASSERT_EQ(t.merges().size(), 1u);
  EXPECT_EQ(t.merges()[0], oracle_first_merge(mols, forced));
}

TEST(Train, TiesBreakLexicographically) {
  const auto c = corpus({ "xy", "ab" });
  const MergeTable t = train_bpe(c, { 2, 1 });
  ASSERT_EQ(t.merges().size(), 2u);
  EXPECT_EQ(t.merges()[0], TokenPair("a", "b"));
  EXPECT_EQ(t.merges()[1], TokenPair("x", "y"));
}

TEST(Train, StopsAtMinFrequency) {
  const auto c = corpus({ "abab", "cd" });
  const MergeTable t = train_bpe(c, { 10, 2 });
  ASSERT_EQ(t.merges().size(), 1u);
  EXPECT_EQ(t.merges()[0], TokenPair("a", "b"));
}

TEST(Train, RejectsBadInput) {
  EXPECT_THROW(train_bpe(std::vector<std::string> {}, {}), BpeError);
  const auto c = corpus({ "a" });
  EXPECT_THROW(train_bpe(c, { -1, 1 }), BpeError);
}

TEST(Train, LongerRunsExtendShorterOnes) {
  const auto mols = fixture::canonical_fixture();
  const MergeTable small = train_bpe(mols, { 20, 1 });
  const MergeTable large = train_bpe(mols, { 60, 1 });
  ASSERT_LE(small.merges().size(), large.merges().size());
  for (std::size_t i = 0; i < small.merges().size(); ++i)
    EXPECT_EQ(small.merges()[i], large.merges()[i]);
}

TEST(Encode, ElementsStayWhole) {
  const MergeTable t = train_bpe(corpus({ "CCCC", "CCCC" }), { 5, 1 });
  const auto tokens = encode("ClCCCC[Na+]", t);
  EXPECT_EQ(tokens.front(), "Cl");
  EXPECT_EQ(decode(tokens), "ClCCCC[Na+]");
  EXPECT_NE(std::find(tokens.begin(), tokens.end(), "Na"), tokens.end());
}

TEST(Encode, RoundTripRandomBytes) {
  const MergeTable t = train_bpe(fixture::canonical_fixture(), { 200, 1 });
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    std::string s(static_cast<std::size_t>(rng.uniform(0, 40)), '\0');
    for (char &c: s)
      c = static_cast<char>(rng.uniform(0, 255));
    EXPECT_EQ(decode(encode(s, t)), s);
  }
}

TEST(Table, SerializeRoundTrip) {
  MergeTable t = train_bpe(fixture::canonical_fixture(), { 50, 1 });
  t.add_base_symbol("\t");
  t.add_base_symbol("\xff");
  const std::string text = t.serialize();
  EXPECT_EQ(text.rfind("#chem-bpe v1\n", 0), 0u);
  const MergeTable back = MergeTable::parse(text);
  EXPECT_EQ(back.merges(), t.merges());
  EXPECT_EQ(back.forced_merges(), t.forced_merges());
  EXPECT_EQ(back.vocab(), t.vocab());
  EXPECT_EQ(back.serialize(), text);
}

TEST(Table, FileRoundTrip) {
  fixture::TempDir dir("bpe");
  const MergeTable t = train_bpe(corpus({ "CCO", "CCN" }), { 3, 1 });
  t.save(dir / "t.txt");
  EXPECT_EQ(MergeTable::load(dir / "t.txt").serialize(), t.serialize());
}

TEST(Table, RejectsDuplicatesAndJunk) {
  MergeTable t;
  t.add_merge({ "x", "y" });
  EXPECT_THROW(t.add_merge({ "x", "y" }), BpeError);
  EXPECT_THROW(MergeTable::parse("not a table"), BpeError);
}

TEST(Escape, RoundTrip) {
  for (const std::string s: { std::string("a\tb"), std::string("\\x"),
                              std::string("\n\r"), std::string("\xff\xfe"),
                              std::string("阿") }) {
    EXPECT_EQ(unescape_token(escape_token(s)), s);
  }
  EXPECT_EQ(escape_token("\t"), "\\t");
  EXPECT_EQ(escape_token("\xff"), "\\xff");
  EXPECT_THROW(unescape_token("\\x1"), BpeError);
}

TEST(Vocab, MergeCountsOnlyNewTokens) {
  const MergeTable t = train_bpe(corpus({ "CCO", "CCO" }), { 2, 1 });
  const VocabMerge v = merge_vocab({ "C", "O", "zz" }, t);
  EXPECT_EQ(v.base_size, 3u);
  EXPECT_EQ(v.tokens.size(), v.base_size + v.added);
  EXPECT_TRUE(v.tokens.count("CC"));
}
