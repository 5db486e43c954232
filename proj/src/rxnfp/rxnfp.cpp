//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/rxnfp/rxnfp.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "retrochem/smiles/canonical.h"
#include "retrochem/util/hash.h"
#include "retrochem/util/parallel.h"

namespace retrochem {
namespace {

constexpr std::string_view kMagic = "RXFP";
constexpr std::uint32_t kVersion = 1;

Molecule environment(const Molecule &mol, std::span<const int> atoms) {
  std::vector<int> index(mol.num_atoms(), -1);
  std::vector<Atom> sub;
  sub.reserve(atoms.size());
  for (int a: atoms) {
    index[a] = static_cast<int>(sub.size());
    Atom atom = mol.atom(a);
    atom.explicit_hydrogens = mol.hydrogen_count(a);
    atom.chirality = Chirality::kNone;
    sub.push_back(atom);
  }
  std::vector<Bond> bonds;
  for (const Bond &b: mol.bonds()) {
    if (index[b.begin] < 0 || index[b.end] < 0)
      continue;
    bonds.push_back({ index[b.begin], index[b.end], b.order,
                      BondDirection::kNone });
  }
  return Molecule(std::move(sub), std::move(bonds));
}

void put_u32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out += static_cast<char>(v >> (8 * i) & 0xff);
}

void put_u64(std::string &out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out += static_cast<char>(v >> (8 * i) & 0xff);
}

std::uint64_t get_le(std::string_view data, std::size_t &pos, int bytes) {
  if (pos + bytes > data.size())
    throw FingerprintError("truncated fingerprint file");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i)
    v |= std::uint64_t { static_cast<unsigned char>(data[pos + i]) } << (8 * i);
  pos += bytes;
  return v;
}

}  // namespace

ReactionFingerprint::ReactionFingerprint(int n_bits, int radius)
    : n_bits_(n_bits), radius_(radius), words_((n_bits + 63) / 64, 0) {
  if (n_bits <= 0)
    throw FingerprintError("n_bits must be positive");
  if (radius < 0)
    throw FingerprintError("radius must not be negative");
}

int ReactionFingerprint::popcount() const {
  int n = 0;
  for (std::uint64_t w: words_)
    n += std::popcount(w);
  return n;
}

std::vector<std::string> circular_substructures(const Molecule &mol,
                                                int radius) {
  if (radius < 0)
    throw FingerprintError("radius must not be negative");
  std::vector<std::string> out;
  const int n = mol.num_atoms();
  std::vector<int> dist(n, -1);
  for (int root = 0; root < n; ++root) {
    // BFS order groups atoms by distance, so each radius is a prefix.
    std::vector<int> order { root };
    std::fill(dist.begin(), dist.end(), -1);
    dist[root] = 0;
    std::size_t level_begin = 0, level_end = 1;
    for (int r = 0; r <= radius; ++r) {
      if (r > 0) {
        for (std::size_t i = level_begin; i < level_end; ++i) {
          for (const Neighbor &nb: mol.neighbors(order[i])) {
            if (dist[nb.atom] < 0) {
              dist[nb.atom] = r;
              order.push_back(nb.atom);
            }
          }
        }
        level_begin = level_end;
        level_end = order.size();
        // Nothing new: larger radii repeat this environment.
        if (level_begin == level_end)
          break;
      }
      out.push_back(canonicalize(environment(mol, order), { false, false }));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> drfp_shingles(const ReactionRecord &rec,
                                       int radius) {
  std::map<std::string, long> balance;
  auto side = [&](const std::vector<Species> &list, long sign) {
    for (const Species &s: list) {
      if (!s.valid)
        throw ReactionError("cannot fingerprint invalid molecule "
                            + s.smiles);
      for (std::string &shingle: circular_substructures(*s.mol, radius))
        balance[std::move(shingle)] += sign;
    }
  };
  side(rec.reactants, +1);
  side(rec.conditions, +1);
  side(rec.products, -1);
  std::vector<std::string> out;
  for (auto &[shingle, count]: balance) {
    if (count != 0)
      out.push_back(shingle);
  }
  return out;
}

ReactionFingerprint drfp(const ReactionRecord &rec,
                         const FingerprintOptions &options) {
  ReactionFingerprint fp(options.n_bits, options.radius);
  const auto n = static_cast<std::uint64_t>(options.n_bits);
  for (const std::string &s: drfp_shingles(rec, options.radius))
    fp.set(static_cast<int>(fnv1a64(s) % n));
  return fp;
}

std::vector<ReactionFingerprint> drfp_all(
    std::span<const ReactionRecord> records, const FingerprintOptions &options,
    unsigned threads) {
  std::vector<ReactionFingerprint> out(records.size());
  parallel_for(records.size(), threads,
               [&](std::size_t i) { out[i] = drfp(records[i], options); });
  return out;
}

double tanimoto(const ReactionFingerprint &a, const ReactionFingerprint &b) {
  if (a.n_bits() != b.n_bits())
    throw FingerprintError("fingerprint lengths differ: "
                           + std::to_string(a.n_bits()) + " vs "
                           + std::to_string(b.n_bits()));
  int both = 0, either = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    both += std::popcount(a.words()[i] & b.words()[i]);
    either += std::popcount(a.words()[i] | b.words()[i]);
  }
  return either == 0 ? 1.0 : double(both) / double(either);
}

std::vector<Edge> knn_edges(std::span<const ReactionFingerprint> fps,
                            std::size_t k, unsigned threads) {
  if (k < 1 || k >= fps.size())
    throw FingerprintError("k must satisfy 1 <= k < "
                           + std::to_string(fps.size()));
  std::vector<std::vector<Edge>> per_query(fps.size());
  parallel_for(fps.size(), threads, [&](std::size_t i) {
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(fps.size() - 1);
    for (std::size_t j = 0; j < fps.size(); ++j) {
      if (j != i)
        cand.emplace_back(tanimoto(fps[i], fps[j]), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end(),
                      [](const auto &x, const auto &y) {
                        return x.first != y.first ? x.first > y.first
                                                  : x.second < y.second;
                      });
    for (std::size_t c = 0; c < k; ++c)
      per_query[i].push_back({ std::min(i, cand[c].second),
                               std::max(i, cand[c].second), cand[c].first });
  });
  std::map<std::pair<std::size_t, std::size_t>, double> unique;
  for (const auto &edges: per_query) {
    for (const Edge &e: edges)
      unique.emplace(std::make_pair(e.src, e.dst), e.similarity);
  }
  std::vector<Edge> out;
  out.reserve(unique.size());
  for (const auto &[key, sim]: unique)
    out.push_back({ key.first, key.second, sim });
  return out;
}

std::string write_fingerprints(std::span<const ReactionFingerprint> fps) {
  std::string out(kMagic);
  const int n_bits = fps.empty() ? kDefaultFingerprintBits : fps[0].n_bits();
  const int radius = fps.empty() ? kDefaultFingerprintRadius : fps[0].radius();
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(n_bits));
  put_u32(out, static_cast<std::uint32_t>(radius));
  put_u32(out, kHashFnv1a64Mod);
  put_u64(out, fps.size());
  const std::size_t row = (n_bits + 7) / 8;
  for (const ReactionFingerprint &fp: fps) {
    if (fp.n_bits() != n_bits || fp.radius() != radius)
      throw FingerprintError("mixed fingerprint parameters in one file");
    for (std::size_t b = 0; b < row; ++b) {
      const std::uint64_t word = fp.words()[b / 8];
      out += static_cast<char>(word >> (8 * (b % 8)) & 0xff);
    }
  }
  return out;
}

std::vector<ReactionFingerprint> read_fingerprints(std::string_view data) {
  if (data.substr(0, 4) != kMagic)
    throw FingerprintError("not a fingerprint file");
  std::size_t pos = 4;
  const auto version = get_le(data, pos, 4);
  if (version != kVersion)
    throw FingerprintError("unsupported fingerprint file version "
                           + std::to_string(version));
  const auto n_bits = static_cast<int>(get_le(data, pos, 4));
  const auto radius = static_cast<int>(get_le(data, pos, 4));
  const auto hash = get_le(data, pos, 4);
  if (hash != kHashFnv1a64Mod)
    throw FingerprintError("unknown hash id " + std::to_string(hash));
  const std::uint64_t count = get_le(data, pos, 8);
  const std::size_t row = (n_bits + 7) / 8;
  if (n_bits <= 0 || data.size() - pos != count * row)
    throw FingerprintError("fingerprint file size does not match header");
  std::vector<ReactionFingerprint> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    ReactionFingerprint fp(n_bits, radius);
    for (std::size_t b = 0; b < row; ++b) {
      const auto byte = static_cast<unsigned char>(data[pos + b]);
      for (int bit = 0; bit < 8; ++bit) {
        const int index = static_cast<int>(b * 8) + bit;
        if (byte >> bit & 1) {
          if (index >= n_bits)
            throw FingerprintError("padding bits set in fingerprint row");
          fp.set(index);
        }
      }
    }
    pos += row;
    out.push_back(std::move(fp));
  }
  return out;
}

std::string fingerprints_jsonl(std::span<const ReactionFingerprint> fps,
                               std::span<const std::string> ids) {
  if (ids.size() != fps.size())
    throw FingerprintError("one id per fingerprint required");
  std::string out;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    nlohmann::ordered_json j;
    j["id"] = ids[i];
    j["n_bits"] = fps[i].n_bits();
    j["radius"] = fps[i].radius();
    auto on = nlohmann::ordered_json::array();
    for (int b = 0; b < fps[i].n_bits(); ++b) {
      if (fps[i].test(b))
        on.push_back(b);
    }
    j["on"] = std::move(on);
    out += j.dump(-1, ' ', false,
                  nlohmann::ordered_json::error_handler_t::replace)
           + '\n';
  }
  return out;
}

std::string edges_csv(std::span<const Edge> edges) {
  std::string out = "src,dst,similarity\n";
  char buf[96];
  for (const Edge &e: edges) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.6f\n", e.src, e.dst,
                  e.similarity);
    out += buf;
  }
  return out;
}

}  // namespace retrochem
