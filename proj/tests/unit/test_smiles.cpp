//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <numeric>
#include <set>

#include "retrochem/smiles/canonical.h"
#include "retrochem/smiles/element.h"
#include "retrochem/smiles/parser.h"
#include "retrochem/smiles/validity.h"
#include "retrochem/util/random.h"
#include "support/fixtures.h"

using namespace retrochem;

namespace {

std::vector<int> random_permutation(int n, Rng &rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  rng.shuffle(p);
  return p;
}

}  // namespace

TEST(Element, TableCoversPeriodicTable) {
  ASSERT_EQ(all_elements().size(), 118u);
  EXPECT_EQ(element(6).symbol, "C");
  EXPECT_EQ(element(118).symbol, "Og");
  EXPECT_EQ(find_element("Cl"), 17);
  EXPECT_EQ(find_element("Xx"), 0);
  EXPECT_TRUE(is_halogen(35));
  EXPECT_FALSE(is_halogen(8));
}

TEST(Parser, CountsAtomsBondsAndHydrogens) {
  const Molecule m = parse_smiles("CC(=O)O");
  EXPECT_EQ(m.num_atoms(), 4);
  EXPECT_EQ(m.num_bonds(), 3);
  EXPECT_EQ(m.hydrogen_count(0), 3);
  EXPECT_EQ(m.hydrogen_count(1), 0);
  EXPECT_EQ(m.hydrogen_count(3), 1);
}

TEST(Parser, BracketAtoms) {
  const Molecule m = parse_smiles("[13CH3][NH3+]");
  EXPECT_EQ(m.atom(0).isotope, 13);
  EXPECT_EQ(m.hydrogen_count(0), 3);
  EXPECT_EQ(m.atom(1).charge, 1);
  EXPECT_EQ(m.hydrogen_count(1), 3);
  EXPECT_EQ(parse_smiles("[Fe+++]").atom(0).charge, 3);
  EXPECT_EQ(parse_smiles("[O--]").atom(0).charge, -2);
}

TEST(Parser, RingClosuresAndPercentLabels) {
  const Molecule m = parse_smiles("C%12CC%12");
  EXPECT_EQ(m.num_bonds(), 3);
  EXPECT_EQ(m.cycle_rank(), 1);
  EXPECT_TRUE(m.in_ring(0));
  EXPECT_EQ(parse_smiles("c1ccc2ccccc2c1").cycle_rank(), 2);
}

TEST(Parser, DisconnectedComponents) {
  const Molecule m = parse_smiles("[Na+].[Cl-]");
  EXPECT_EQ(m.num_components(), 2);
  EXPECT_NE(m.component(0), m.component(1));
}

TEST(Parser, RejectsUnsupportedFeatures) {
  EXPECT_THROW(parse_smiles("[CH3:1]C"), SmilesError);
  EXPECT_THROW(parse_smiles("C*"), SmilesError);
  EXPECT_THROW(parse_smiles("C$C"), SmilesError);
  EXPECT_THROW(parse_smiles(""), SmilesError);
  EXPECT_THROW(parse_smiles("C1CC"), SmilesError);
  EXPECT_THROW(parse_smiles("C((C)"), SmilesError);
  EXPECT_THROW(parse_smiles("[Xx]"), SmilesError);
}

TEST(Parser, ErrorCarriesPosition) {
  try {
    parse_smiles("CC(C");
    FAIL();
  } catch (const SmilesError &e) {
    EXPECT_LE(e.position(), 4u);
  }
}

TEST(Parser, StereoTags) {
  const Molecule m = parse_smiles("N[C@@H](C)C(=O)O");
  ASSERT_EQ(m.tetrahedral_centers().size(), 1u);
  EXPECT_EQ(m.tetrahedral_centers()[0].atom, 1);
  const Molecule db = parse_smiles("F/C=C/F");
  ASSERT_EQ(db.double_bond_stereo().size(), 1u);
  EXPECT_FALSE(db.double_bond_stereo()[0].cis);
  EXPECT_TRUE(parse_smiles("F/C=C\\F").double_bond_stereo()[0].cis);
}

TEST(MolecularWeight, MatchesHandSums) {
  // C 12.011, H 1.008, O 15.999, N 14.007
  EXPECT_NEAR(molecular_weight(parse_smiles("CCO")), 2 * 12.011 + 6 * 1.008
                                                         + 15.999, 1e-3);
  EXPECT_NEAR(molecular_weight(parse_smiles("c1ccncc1")),
              5 * 12.011 + 5 * 1.008 + 14.007, 1e-3);
}

TEST(Validity, ReportsValenceAtom) {
  const ValidityReport r = validate_smiles("CC(C)(C)(C)C");
  EXPECT_FALSE(r.valid);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_EQ(r.failures[0].reason, ValidityReason::kValenceExceeded);
  EXPECT_EQ(r.failures[0].atom, 1);
}

TEST(Validity, AromaticFailures) {
  const ValidityReport odd = validate_smiles("c1cccc1");
  EXPECT_FALSE(odd.valid);
  EXPECT_EQ(odd.failures[0].reason, ValidityReason::kKekulizationFailed);
  const ValidityReport open = validate_smiles("cc");
  EXPECT_FALSE(open.valid);
  EXPECT_EQ(open.failures[0].reason, ValidityReason::kAromaticAcyclic);
  EXPECT_EQ(validate_smiles("C1CC").failures[0].reason,
            ValidityReason::kParseError);
}

TEST(Validity, SuiteFile) {
  for (const std::string &line:
       fixture::read_lines(fixture::data_path("validity_suite.tsv"))) {
    const std::size_t tab = line.find('\t');
    const std::string smiles = line.substr(0, tab);
    const bool expected = line.compare(tab + 1, 5, "valid") == 0;
    EXPECT_EQ(validate_smiles(smiles).valid, expected) << smiles;
  }
}

TEST(Kekulize, BenzeneAlternates) {
  const Molecule k = kekulize(parse_smiles("c1ccccc1"));
  int doubles = 0;
  for (const Bond &b: k.bonds())
    doubles += b.order == BondOrder::kDouble;
  EXPECT_EQ(doubles, 3);
  for (int a = 0; a < k.num_atoms(); ++a) {
    int d = 0;
    for (const Neighbor &n: k.neighbors(a))
      d += k.bond(n.bond).order == BondOrder::kDouble;
    EXPECT_EQ(d, 1);
  }
}

TEST(ValenceTable, ChargeRules) {
  const ValenceTable &t = ValenceTable::default_table();
  EXPECT_EQ(t.max_valence(7, 0), 3);
  EXPECT_EQ(t.max_valence(7, 1), 4);
  EXPECT_EQ(t.max_valence(6, 0), 4);
  EXPECT_FALSE(t.checks(26));
}

TEST(Canonical, EquivalentSpellingsAgree) {
  const std::vector<std::vector<std::string>> groups = {
    { "OCC", "CCO", "C(O)C", "[CH3][CH2][OH]" },
    { "c1ccccc1", "c1ccc(cc1)" },
    { "C1=CC=CC=C1", "C=1C=CC=CC1" },
    { "CN.O=[N+]([O-])c1cnc(Cl)nc1Cl", "O=[N+]([O-])c1cnc(Cl)nc1Cl.CN" },
    { "C(C)(O)C", "CC(C)O", "OC(C)C" },
    { "CS(C)=O", "S(C)(=O)C" },
    { "F/C=C/F", "F\\C=C\\F" },
  };
  for (const auto &group: groups) {
    const std::string first = canonical_smiles(group[0]);
    for (const std::string &s: group)
      EXPECT_EQ(canonical_smiles(s), first) << s;
  }
}

TEST(Canonical, KekuleAndAromaticFormsStayDistinct) {
  // No aromaticity perception: the written bond orders are kept.
  EXPECT_NE(canonical_smiles("C1=CC=CC=C1"), canonical_smiles("c1ccccc1"));
}

TEST(Canonical, DistinguishesStereoisomers) {
  EXPECT_NE(canonical_smiles("N[C@@H](C)C(=O)O"),
            canonical_smiles("N[C@H](C)C(=O)O"));
  EXPECT_NE(canonical_smiles("F/C=C/F"), canonical_smiles("F/C=C\\F"));
  EXPECT_EQ(canonical_smiles("N[C@@H](C)C(=O)O", { false, true }),
            canonical_smiles("N[C@H](C)C(=O)O", { false, true }));
}

TEST(Canonical, OutputReparsesToSameString) {
  for (const std::string &s: fixture::canonical_fixture()) {
    const std::string c = canonical_smiles(s);
    EXPECT_EQ(canonical_smiles(c), c) << s;
  }
}

TEST(Canonical, InvariantUnderAtomAndBondOrder) {
  Rng rng(7);
  const auto mols = fixture::canonical_fixture();
  for (std::size_t i = 0; i < mols.size(); i += 5) {
    const Molecule m = parse_smiles(mols[i]);
    const std::string ref = canonicalize(m);
    for (int trial = 0; trial < 10; ++trial) {
      const Molecule relabeled
          = relabel_atoms(m, random_permutation(m.num_atoms(), rng));
      const auto nb = static_cast<std::size_t>(relabeled.num_bonds());
      auto swaps = std::make_unique<bool[]>(nb);
      for (std::size_t b = 0; b < nb; ++b)
        swaps[b] = rng.uniform(0, 1) == 1;
      const Molecule shuffled = reorder_bonds(
          relabeled, random_permutation(relabeled.num_bonds(), rng),
          std::span<const bool>(swaps.get(), nb));
      EXPECT_EQ(canonicalize(relabeled), ref) << mols[i];
      EXPECT_EQ(canonicalize(shuffled), ref) << mols[i];
    }
  }
}

TEST(Canonical, RandomSmilesRoundTrip) {
  const auto mols = fixture::canonical_fixture();
  for (std::size_t i = 0; i < mols.size(); i += 3) {
    const Molecule m = parse_smiles(mols[i]);
    const std::string ref = canonicalize(m);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const std::string variant = random_smiles(m, seed);
      EXPECT_EQ(canonical_smiles(variant), ref)
          << mols[i] << " -> " << variant;
    }
  }
}

TEST(Fragments, LargestByHeavyAtoms) {
  const auto frags = split_fragments("CC.CCCCO.[Na+]");
  ASSERT_EQ(frags.size(), 3u);
  EXPECT_EQ(canonicalize(largest_fragment(frags)), canonical_smiles("CCCCO"));
  EXPECT_EQ(largest_fragment_index(frags), 1u);
}

TEST(StripStereo, DropsAllMarks) {
  const Molecule m = strip_stereo(parse_smiles("F/C=C/[C@H](Cl)Br"));
  EXPECT_FALSE(m.has_stereo());
}
