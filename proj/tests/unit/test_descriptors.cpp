//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "retrochem/descriptors/descriptors.h"
#include "retrochem/smiles/canonical.h"
#include "retrochem/smiles/parser.h"
#include "support/fixtures.h"

using namespace retrochem;

namespace {

double value(std::string_view smiles, std::string_view id) {
  return DescriptorRegistry::builtin().compute(parse_smiles(smiles), id);
}

// Floyd-Warshall over the bond list, heavy atoms only.
std::vector<std::vector<double>> floyd(const Molecule &m,
                                       std::vector<int> &heavy) {
  heavy.clear();
  for (int i = 0; i < m.num_atoms(); ++i) {
    if (m.atom(i).element != 1)
      heavy.push_back(i);
  }
  const std::size_t n = heavy.size();
  std::vector<int> pos(m.num_atoms(), -1);
  for (std::size_t i = 0; i < n; ++i)
    pos[heavy[i]] = static_cast<int>(i);
  const double inf = 1e18;
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i)
    d[i][i] = 0;
  for (const Bond &b: m.bonds()) {
    if (pos[b.begin] < 0 || pos[b.end] < 0)
      continue;
    d[pos[b.begin]][pos[b.end]] = d[pos[b.end]][pos[b.begin]] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

double balaban_oracle(const Molecule &m) {
  std::vector<int> heavy;
  const auto d = floyd(m, heavy);
  std::vector<int> pos(m.num_atoms(), -1);
  for (std::size_t i = 0; i < heavy.size(); ++i)
    pos[heavy[i]] = static_cast<int>(i);
  std::vector<double> s(heavy.size(), 0);
  for (std::size_t i = 0; i < heavy.size(); ++i)
    for (double x: d[i])
      s[i] += x;
  int q = 0;
  double sum = 0;
  for (const Bond &b: m.bonds()) {
    if (pos[b.begin] < 0 || pos[b.end] < 0)
      continue;
    ++q;
    sum += 1.0 / std::sqrt(s[pos[b.begin]] * s[pos[b.end]]);
  }
  const int mu = q - static_cast<int>(heavy.size()) + 1;
  return q / (mu + 1.0) * sum;
}

}  // namespace

TEST(Registry, BuiltinHasStableIds) {
  const DescriptorRegistry &r = DescriptorRegistry::builtin();
  EXPECT_GE(r.size(), 30u);
  for (const char *id: { "molecular_weight", "heavy_atom_count",
                         "valence_electrons", "nhoh_count", "no_count",
                         "ring_count", "rotatable_bonds", "halogen_count",
                         "aromatic_ring_count", "balaban_j" })
    EXPECT_TRUE(r.contains(id)) << id;
  EXPECT_EQ(r.get("heavy_atom_count").name, "number of heavy atoms");
  EXPECT_EQ(r.get("molecular_weight").unit, "g/mol");
  const auto list = r.list();
  for (std::size_t i = 1; i < list.size(); ++i)
    EXPECT_LT(list[i - 1]->id, list[i]->id);
}

TEST(Registry, RejectsDuplicateAndUnknown) {
  DescriptorRegistry r;
  r.add({ "x", "x", "", [](const Molecule &) { return 1.0; }, true, "" });
  EXPECT_THROW(r.add({ "x", "y", "", [](const Molecule &) { return 2.0; },
                       true, "" }),
               DescriptorError);
  EXPECT_THROW(r.get("missing"), DescriptorError);
}

TEST(Counts, RotatableBondDefinition) {
  // Single, acyclic, both ends heavy-degree >= 2, amide C-N excluded. The
  // ester C-O in aspirin counts here; RDKit's strict pattern drops it.
  EXPECT_EQ(value("CC(=O)Oc1ccccc1C(=O)O", "rotatable_bonds"), 3);
  EXPECT_EQ(value("CCC(=O)NCC", "rotatable_bonds"), 2);
  EXPECT_EQ(value("CC#CC", "rotatable_bonds"), 0);
  EXPECT_EQ(value("C1CCCCC1C", "rotatable_bonds"), 0);
}

TEST(Registry, ExportTableHasOneLinePerDescriptor) {
  const DescriptorRegistry &r = DescriptorRegistry::builtin();
  const std::string table = r.export_table();
  const auto lines = std::count(table.begin(), table.end(), '\n');
  // two comment lines, then one row per descriptor
  EXPECT_EQ(static_cast<std::size_t>(lines), r.size() + 2);
  EXPECT_NE(table.find("balaban_j\tBalaban J value\t"), std::string::npos);
}

TEST(Counts, AspirinAgreesWithReferenceToolkit) {
  const std::string aspirin = "CC(=O)Oc1ccccc1C(=O)O";
  EXPECT_EQ(value(aspirin, "heavy_atom_count"), 13);
  EXPECT_EQ(value(aspirin, "valence_electrons"), 68);
  EXPECT_EQ(value(aspirin, "nhoh_count"), 1);
  EXPECT_EQ(value(aspirin, "no_count"), 4);
  EXPECT_EQ(value(aspirin, "aromatic_ring_count"), 1);
  EXPECT_EQ(value(aspirin, "ring_count"), 1);
  EXPECT_NEAR(value(aspirin, "fraction_csp3"), 1.0 / 9.0, 1e-12);
  EXPECT_NEAR(value(aspirin, "molecular_weight"),
              9 * 12.011 + 8 * 1.008 + 4 * 15.999, 1e-3);
}

TEST(Counts, HalogensAndRings) {
  EXPECT_EQ(value("ClC(Cl)(Br)F.I", "halogen_count"), 5);
  EXPECT_EQ(value("c1ccc2ccccc2c1", "aromatic_ring_count"), 2);
  EXPECT_EQ(value("C1CC2CCC1C2", "ring_count"), 2);
  EXPECT_EQ(value("C1CC2CCC1C2", "smallest_ring_size"), 5);
  EXPECT_EQ(value("C1CCCCC1c1ccccc1", "aromatic_ring_count"), 1);
}

TEST(MinimumCycleBasis, SizesOfFusedSystems) {
  const auto rings = minimum_cycle_basis(parse_smiles("c1ccc2ccccc2c1"));
  ASSERT_EQ(rings.size(), 2u);
  EXPECT_EQ(rings[0].size(), 6u);
  EXPECT_EQ(rings[1].size(), 6u);
  const auto cubane = minimum_cycle_basis(
      parse_smiles("C12C3C4C1C5C2C3C45"));
  EXPECT_EQ(cubane.size(), 5u);
  for (const auto &r: cubane)
    EXPECT_EQ(r.size(), 4u);
}

TEST(Balaban, PinnedAcyclicValues) {
  // Reference toolkit values; single bonds only so bond-order weighting
  // cannot differ.
  EXPECT_NEAR(value("CCCC", "balaban_j"), 1.9747448713915894, 1e-12);
  EXPECT_NEAR(value("CC(C)C", "balaban_j"), 2.3237900077244498, 1e-12);
  EXPECT_NEAR(value("CCO", "balaban_j"), 1.6329931618554523, 1e-12);
}

TEST(Balaban, BenzeneByHand) {
  // Row sums are 1+1+2+2+3 = 9, six bonds, one ring: 6/2 * 6/9.
  EXPECT_NEAR(value("c1ccccc1", "balaban_j"), 2.0, 1e-12);
}

TEST(Balaban, MatchesFloydWarshallOracle) {
  int checked = 0;
  for (const std::string &s: fixture::canonical_fixture()) {
    const Molecule m = parse_smiles(s);
    if (m.num_components() != 1 || m.num_bonds() == 0)
      continue;
    EXPECT_NEAR(balaban_j(m).value, balaban_oracle(m), 1e-9) << s;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Balaban, DisconnectedUsesLargestFragment) {
  const BalabanResult r = balaban_j(parse_smiles("CCCC.O"));
  EXPECT_TRUE(r.largest_fragment_only);
  EXPECT_NEAR(r.value, 1.9747448713915894, 1e-12);
}

TEST(DistanceMatrix, SymmetricWithComponents) {
  const auto d = distance_matrix(parse_smiles("CCC.O"));
  EXPECT_EQ(d[0][2], 2);
  EXPECT_EQ(d[2][0], 2);
  EXPECT_EQ(d[0][3], -1);
}

TEST(Topological, WienerAndZagreb) {
  // n-butane: distances 1,2,3,1,2,1 sum to 10; degrees 1,2,2,1.
  EXPECT_EQ(value("CCCC", "wiener_index"), 10);
  EXPECT_EQ(value("CCCC", "zagreb_m1"), 1 + 4 + 4 + 1);
  EXPECT_EQ(value("CCCC", "zagreb_m2"), 2 + 4 + 2);
  EXPECT_NEAR(value("CCCC", "randic_index"),
              2 / std::sqrt(2.0) + 1 / std::sqrt(4.0), 1e-12);
}

TEST(Format, IntegersAndReals) {
  const DescriptorRegistry &r = DescriptorRegistry::builtin();
  EXPECT_EQ(format_descriptor_value(r.get("heavy_atom_count"), 13.0), "13");
  EXPECT_EQ(format_descriptor_value(r.get("balaban_j"), 1.97474487), "1.975");
}

TEST(Descriptors, InvariantUnderSpelling) {
  const DescriptorRegistry &r = DescriptorRegistry::builtin();
  const auto mols = fixture::canonical_fixture();
  for (std::size_t i = 0; i < mols.size(); i += 7) {
    const Molecule a = parse_smiles(mols[i]);
    const Molecule b = parse_smiles(random_smiles(a, i));
    for (const Descriptor *d: r.list())
      EXPECT_NEAR(d->compute(a), d->compute(b), 1e-9)
          << d->id << " " << mols[i];
  }
}
