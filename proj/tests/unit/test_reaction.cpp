//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <sstream>

#include "retrochem/reaction/dataset.h"
#include "retrochem/reaction/reaction.h"
#include "retrochem/smiles/canonical.h"
#include "retrochem/smiles/parser.h"
#include "retrochem/util/csv.h"
#include "support/fixtures.h"

using namespace retrochem;

TEST(Reaction, ParsesThreeSegments) {
  const ReactionRecord r
      = parse_reaction("CN.O=[N+]([O-])c1cnc(Cl)nc1Cl>C1COCC1>"
                       "CNc1nc(Cl)ncc1[N+](=O)[O-]");
  ASSERT_EQ(r.reactants.size(), 2u);
  ASSERT_EQ(r.conditions.size(), 1u);
  ASSERT_EQ(r.products.size(), 1u);
  EXPECT_TRUE(r.all_valid());
  EXPECT_EQ(r.conditions[0].smiles, "C1COCC1");
}

TEST(Reaction, EmptyConditionsAndBadShapes) {
  EXPECT_TRUE(parse_reaction("CCO>>CC=O").conditions.empty());
  EXPECT_THROW(parse_reaction("CCO>CC=O"), ReactionError);
  EXPECT_THROW(parse_reaction(">C>CC"), ReactionError);
  EXPECT_THROW(parse_reaction("CC>C>"), ReactionError);
  EXPECT_THROW(parse_reaction("A>B>C>D"), ReactionError);
}

TEST(Reaction, KeepsInvalidSpeciesText) {
  const ReactionRecord r = parse_reaction("C(C)(C)(C)(C)C.CO>>CCO");
  EXPECT_FALSE(r.reactants[0].valid);
  EXPECT_EQ(r.reactants[0].smiles, "C(C)(C)(C)(C)C");
  EXPECT_FALSE(r.all_valid());
  EXPECT_THROW(canonical_key(r, KeyMode::kWithConditions), ReactionError);
}

TEST(Reaction, ReactionSmilesRoundTrip) {
  const std::string text = "CC(=O)O.OCC>OS(=O)(=O)O>CC(=O)OCC";
  EXPECT_EQ(parse_reaction(text).reaction_smiles(), text);
}

TEST(CanonicalKey, IgnoresOrderAndSpelling) {
  const ReactionRecord a = parse_reaction("CC(=O)O.OCC>OS(=O)(=O)O>CC(=O)OCC");
  const ReactionRecord b = parse_reaction("C(C)O.OC(C)=O>O=S(=O)(O)O>O=C(C)OCC");
  EXPECT_EQ(canonical_key(a, KeyMode::kWithConditions),
            canonical_key(b, KeyMode::kWithConditions));
}

TEST(CanonicalKey, ConditionModes) {
  const ReactionRecord a = parse_reaction("CCO.CC(=O)O>OS(=O)(=O)O>CCOC(C)=O");
  const ReactionRecord b = parse_reaction("CCO.CC(=O)O>>CCOC(C)=O");
  EXPECT_NE(canonical_key(a, KeyMode::kWithConditions).key,
            canonical_key(b, KeyMode::kWithConditions).key);
  EXPECT_EQ(canonical_key(a, KeyMode::kWithoutConditions).key,
            canonical_key(b, KeyMode::kWithoutConditions).key);
  // Expected form, built independently from per-molecule canonical strings.
  std::vector<std::string> r = { canonical_smiles("CCO"),
                                 canonical_smiles("CC(=O)O") };
  std::sort(r.begin(), r.end());
  EXPECT_EQ(canonical_key(b, KeyMode::kWithoutConditions).key,
            r[0] + "." + r[1] + ">>" + canonical_smiles("CCOC(C)=O"));
}

TEST(Overlap, CountsDistinctSharedKeys) {
  std::vector<ReactionRecord> a = {
    parse_reaction("CCO.CC(=O)O>OS(=O)(=O)O>CCOC(C)=O"),
    parse_reaction("CCO.CC(=O)O>OS(=O)(=O)O>CCOC(C)=O"),
    parse_reaction("CN.O=Cc1ccccc1>>CNCc1ccccc1"),
  };
  std::vector<ReactionRecord> b = {
    parse_reaction("OC(C)=O.OCC>>O=C(C)OCC"),
    parse_reaction("O=Cc1ccccc1.CN>>CNCc1ccccc1"),
  };
  EXPECT_EQ(overlap(a, b, KeyMode::kWithConditions).count, 1u);
  EXPECT_EQ(overlap(a, b, KeyMode::kWithoutConditions).count, 2u);
  EXPECT_EQ(distinct_key_count(a, KeyMode::kWithConditions), 2u);
  EXPECT_EQ(overlap(a, a, KeyMode::kWithConditions).count, 2u);
}

TEST(Overlap, StereoFlag) {
  std::vector<ReactionRecord> a = { parse_reaction("F/C=C/F>>F[C@H](Cl)Br") };
  std::vector<ReactionRecord> b = { parse_reaction("F/C=C\\F>>F[C@@H](Cl)Br") };
  EXPECT_EQ(overlap(a, b, KeyMode::kWithConditions, true).count, 0u);
  EXPECT_EQ(overlap(a, b, KeyMode::kWithConditions, false).count, 1u);
}

TEST(GroupByProduct, MergesRoutes) {
  std::vector<ReactionRecord> recs = {
    parse_reaction("CC(=O)O.OCC>OS(=O)(=O)O>CC(=O)OCC"),
    parse_reaction("CC(=O)Cl.OCC>CCN(CC)CC>O=C(C)OCC"),
    parse_reaction("CN.O=Cc1ccccc1>>CNCc1ccccc1"),
  };
  const auto groups = group_by_product(recs);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups.at(canonical_smiles("CCOC(C)=O")).size(), 2u);
}

TEST(Csv, QuotedFieldsAndBlankLines) {
  const auto rows = parse_csv("a,b\n\n\"x,1\",\"say \"\"hi\"\"\"\n\"multi\nline\",z\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].fields[0], "x,1");
  EXPECT_EQ(rows[1].fields[1], "say \"hi\"");
  EXPECT_EQ(rows[2].fields[0], "multi\nline");
  EXPECT_EQ(rows[2].line, 4u);
  EXPECT_THROW(parse_csv("\"open\n"), CsvError);
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("plain"), "plain");
}

TEST(Dataset, IngestsCsvManifest) {
  const DatasetManifest m
      = DatasetManifest::load(fixture::data_path("datasets/uspto_mini.toml"));
  EXPECT_EQ(m.name, "USPTO-mini");
  EXPECT_TRUE(m.matches("uspto"));
  EXPECT_TRUE(m.matches("USPTO-mini"));
  const IngestResult r = ingest_dataset(m);
  EXPECT_EQ(r.records.size(), 8u);
  EXPECT_EQ(r.skipped, 0u);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.records[0].record_id, "u1");
  EXPECT_EQ(r.records[0].source, "USPTO-mini");
}

TEST(Dataset, IngestsJsonlArraysAndStrings) {
  const IngestResult r = ingest_dataset(DatasetManifest::load(
      fixture::data_path("datasets/biochem_mini.toml")));
  ASSERT_EQ(r.records.size(), 5u);
  EXPECT_EQ(r.records[4].reactants.size(), 2u);
  for (const ReactionRecord &rec: r.records)
    EXPECT_TRUE(rec.conditions.empty());
}

TEST(Dataset, YieldColumn) {
  const IngestResult r = ingest_dataset(DatasetManifest::load(
      fixture::data_path("datasets/yields_10.toml")));
  ASSERT_EQ(r.records.size(), 10u);
  EXPECT_DOUBLE_EQ(*r.records[0].yield_percent, 81.5);
  EXPECT_DOUBLE_EQ(*r.records[9].yield_percent, 0.5);
}

TEST(Dataset, SkipsBadRowsWithWarnings) {
  fixture::TempDir dir("ingest");
  fixture::write_text(dir / "d.csv",
                      "rxn,y\nCCO>>CC=O,50\nC(C)(C)(C)(C)C>>C,1\nnot a "
                      "reaction,2\nCO>>C=O,150\n");
  fixture::write_text(dir / "d.toml",
                      "name = \"d\"\npath = \"d.csv\"\nformat = \"csv\"\ncount = 9\n"
                      "[columns]\nreaction = \"rxn\"\nyield = \"y\"\n");
  const IngestResult r = ingest_dataset(DatasetManifest::load(dir / "d.toml"));
  EXPECT_EQ(r.rows, 4u);
  EXPECT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.skipped, 2u);
  EXPECT_DOUBLE_EQ(*r.records[1].yield_percent, 100.0);
  // two skips, one clamp, one count mismatch
  EXPECT_EQ(r.warnings.size(), 4u);
}

TEST(Dataset, ManifestErrors) {
  EXPECT_THROW(DatasetManifest::parse("path = \"x.csv\"", "."), ManifestError);
  // format is required
  EXPECT_THROW(DatasetManifest::parse("name = \"x\"\npath = \"x.csv\"\n"
                                      "[columns]\nreaction = \"r\"\n",
                                      "."),
               ManifestError);
  EXPECT_THROW(DatasetManifest::parse(
                   "name = \"x\"\npath = \"x.csv\"\nformat = \"csv\"\n"
                   "[columns]\n", "."),
               ManifestError);
  EXPECT_THROW(DatasetManifest::parse("name = \"x\"\npath = \"x.csv\"\n"
                                      "format = \"xml\"\n[columns]\n"
                                      "reaction = \"r\"\n",
                                      "."),
               ManifestError);
  const DatasetManifest m = DatasetManifest::parse(
      "name = \"x\"\npath = \"missing.csv\"\nformat = \"csv\"\n"
      "[columns]\nreaction = \"r\"\n",
      "/nonexistent");
  EXPECT_THROW(ingest_dataset(m), DatasetError);
}

TEST(Records, JsonRoundTrip) {
  ReactionRecord r = parse_reaction("CCO.CC(=O)O>OS(=O)(=O)O>CCOC(C)=O");
  r.yield_percent = 42.5;
  r.record_id = "r1";
  r.source = "test";
  const std::string line = serialize_record(r);
  const ReactionRecord back = parse_record_json(line);
  EXPECT_EQ(back.reaction_smiles(), r.reaction_smiles());
  EXPECT_EQ(back.record_id, "r1");
  EXPECT_DOUBLE_EQ(*back.yield_percent, 42.5);
  EXPECT_EQ(serialize_record(back), line);
}
