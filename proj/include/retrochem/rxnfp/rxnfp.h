//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_RXNFP_RXNFP_H_
#define RETROCHEM_RXNFP_RXNFP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "retrochem/reaction/reaction.h"

namespace retrochem {

class FingerprintError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultFingerprintBits = 2048;
inline constexpr int kDefaultFingerprintRadius = 3;

// Identifies the shingle hash in file headers: FNV-1a 64 of the shingle
// bytes, reduced modulo n_bits.
inline constexpr std::uint32_t kHashFnv1a64Mod = 1;

struct FingerprintOptions {
  int radius = kDefaultFingerprintRadius;
  int n_bits = kDefaultFingerprintBits;
};

class ReactionFingerprint {
public:
  ReactionFingerprint() = default;
  ReactionFingerprint(int n_bits, int radius);

  int n_bits() const { return n_bits_; }
  int radius() const { return radius_; }
  bool test(int bit) const { return words_[bit >> 6] >> (bit & 63) & 1; }
  void set(int bit) { words_[bit >> 6] |= std::uint64_t { 1 } << (bit & 63); }
  int popcount() const;
  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const ReactionFingerprint &,
                         const ReactionFingerprint &) = default;

private:
  int n_bits_ = 0;
  int radius_ = 0;
  std::vector<std::uint64_t> words_;
};

// Canonical SMILES of the atom environments of radius 0..radius around
// every atom, sorted, duplicates kept. Environments are induced subgraphs
// written without stereo; each atom keeps its hydrogen count from the
// parent molecule.
std::vector<std::string> circular_substructures(const Molecule &mol,
                                                int radius);

// Shingles whose multiplicity differs between the left side (reactants and
// conditions) and the right side (products); sorted, distinct. Throws
// ReactionError for an invalid molecule.
std::vector<std::string> drfp_shingles(const ReactionRecord &rec,
                                       int radius);

ReactionFingerprint drfp(const ReactionRecord &rec,
                         const FingerprintOptions &options = {});

// Output order follows input order for any thread count.
std::vector<ReactionFingerprint> drfp_all(
    std::span<const ReactionRecord> records,
    const FingerprintOptions &options = {}, unsigned threads = 1);

// |a & b| / |a | b|, 1.0 for two empty vectors. Throws FingerprintError
// on a length mismatch.
double tanimoto(const ReactionFingerprint &a, const ReactionFingerprint &b);

struct Edge {
  std::size_t src = 0;  // src < dst
  std::size_t dst = 0;
  double similarity = 0.0;
};

// Each fingerprint linked to its k most similar others (ties to the lower
// index); undirected, deduplicated, sorted by (src, dst). Requires
// 1 <= k < fps.size().
std::vector<Edge> knn_edges(std::span<const ReactionFingerprint> fps,
                            std::size_t k, unsigned threads = 1);

// Binary form: "RXFP", then little-endian u32 version, n_bits, radius,
// hash id and u64 count, then one row of ceil(n_bits / 8) bytes per
// fingerprint, bit i in byte i / 8 at position i % 8.
std::string write_fingerprints(std::span<const ReactionFingerprint> fps);
std::vector<ReactionFingerprint> read_fingerprints(std::string_view data);

// One line per fingerprint: {"id", "n_bits", "radius", "on": [bits]}.
std::string fingerprints_jsonl(std::span<const ReactionFingerprint> fps,
                               std::span<const std::string> ids);

// "src,dst,similarity" header, then one row per edge.
std::string edges_csv(std::span<const Edge> edges);

}  // namespace retrochem

#endif  // RETROCHEM_RXNFP_RXNFP_H_
