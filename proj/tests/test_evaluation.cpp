#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "semmatch/evaluation.hpp"

using namespace semmatch;

namespace {

const std::string kData = SEMMATCH_DATA_DIR;

GoldMapping gold_of(const std::string& tsv) {
  std::istringstream in(tsv);
  return GoldMapping::load(in, "test");
}

const char* kThree = "sourceRef\ttargetRef\nA\tX\nB\tY\nC\tZ\n";

}  // namespace

TEST(Evaluate, TwoOfThree) {
  auto r = evaluate(std::set<RefPair>{{"A", "X"}, {"B", "Y"}, {"C", "W"}}, gold_of(kThree));
  EXPECT_EQ(r.found, 3u);
  EXPECT_EQ(r.correct, 2u);
  EXPECT_EQ(r.incorrect, 1u);
  EXPECT_EQ(r.missed, 1u);
  EXPECT_NEAR(r.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.recall, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.f_measure, 2.0 / 3.0, 1e-12);
}

TEST(Evaluate, PerfectMatch) {
  auto r = evaluate(std::set<RefPair>{{"A", "X"}, {"B", "Y"}, {"C", "Z"}}, gold_of(kThree));
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.f_measure, 1.0);
}

TEST(Evaluate, NothingFound) {
  auto r = evaluate(std::set<RefPair>{}, gold_of(kThree));
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f_measure, 0.0);
}

TEST(Evaluate, AllWrong) {
  auto r = evaluate(std::set<RefPair>{{"A", "Y"}}, gold_of(kThree));
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f_measure, 0.0);
}

// One correct of four found against five gold pairs: P = 1/4, R = 1/5,
// F = 2PR/(P+R) = 2/9.
TEST(Evaluate, HarmonicMean) {
  auto gold = gold_of("sourceRef\ttargetRef\nA\tX\nB\tY\nC\tZ\nD\tV\nE\tU\n");
  auto r = evaluate(std::set<RefPair>{{"A", "X"}, {"B", "Q"}, {"C", "Q"}, {"D", "Q"}}, gold);
  EXPECT_DOUBLE_EQ(r.precision, 0.25);
  EXPECT_DOUBLE_EQ(r.recall, 0.2);
  EXPECT_NEAR(r.f_measure, 2.0 / 9.0, 1e-12);
}

TEST(Gold, SkipsCommentsAndBlankLines) {
  auto g = gold_of("# header comment\nsourceRef\ttargetRef\n\nA\tX\n# note\nB\tY\n");
  EXPECT_EQ(g.pairs.size(), 2u);
}

TEST(Gold, Errors) {
  EXPECT_THROW(gold_of("source\ttarget\nA\tX\n"), ParseError);
  EXPECT_THROW(gold_of("sourceRef\ttargetRef\nA X\n"), ParseError);
  EXPECT_THROW(gold_of("sourceRef\ttargetRef\n"), ValidationError);
  EXPECT_THROW(GoldMapping::load_file("/nonexistent/gold.tsv"), IoError);
}

TEST(Gold, BundledGoldResolvesAgainstFixtures) {
  for (const char* f : {"purchase", "business_flat", "transport", "publication"}) {
    std::string dir = kData + "/fixtures/" + f + "/";
    auto gold = GoldMapping::load_file(dir + "gold.tsv");
    EXPECT_NO_THROW(check_gold(gold, Schema::load_file(dir + "export.json"),
                               Schema::load_file(dir + "co.json")))
        << f;
  }
}

TEST(Gold, CheckRejectsUnknownRef) {
  auto dir = kData + "/fixtures/purchase/";
  auto gold = gold_of("sourceRef\ttargetRef\nNope\tOrder\n");
  EXPECT_THROW(check_gold(gold, Schema::load_file(dir + "export.json"),
                          Schema::load_file(dir + "co.json")),
               ValidationError);
}

TEST(Sweep, RecallNonIncreasingInConfidenceThreshold) {
  const auto& tax = bundled_taxonomy();
  for (const char* f : {"purchase", "business_flat", "transport", "publication"}) {
    std::string dir = kData + "/fixtures/" + f + "/";
    auto exp = Schema::load_file(dir + "export.json");
    auto co = Schema::load_file(dir + "co.json");
    auto gold = GoldMapping::load_file(dir + "gold.tsv");
    std::vector<MatchConfig> grid;
    for (int k = 0; k <= 20; ++k) {
      MatchConfig c;
      c.confidence_threshold = k / 20.0;
      grid.push_back(c);
    }
    auto rows = threshold_sweep(tax, exp, co, gold, grid);
    for (std::size_t i = 1; i < rows.size(); ++i)
      EXPECT_LE(rows[i].report.recall, rows[i - 1].report.recall) << f << " row " << i;
  }
}

TEST(Sweep, DefaultGridAndCsv) {
  auto grid = default_sweep_grid();
  ASSERT_EQ(grid.size(), 5u);
  EXPECT_EQ(grid.front().confidence_threshold, 0.0);
  EXPECT_EQ(grid.back().confidence_threshold, 1.0);

  const auto& tax = bundled_taxonomy();
  std::string dir = kData + "/fixtures/purchase/";
  auto rows = threshold_sweep(tax, Schema::load_file(dir + "export.json"),
                              Schema::load_file(dir + "co.json"),
                              GoldMapping::load_file(dir + "gold.tsv"), grid);
  auto csv = sweep_csv(rows);
  EXPECT_EQ(csv, sweep_csv(rows));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "labelThreshold,externalThreshold,confidenceThreshold,labelWeight,externalWeight,"
            "internalWeight,measure,oneToOne,flatNeutral,found,correct,incorrect,missed,"
            "precision,recall,fMeasure");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(Sweep, GridParsing) {
  auto grid = parse_sweep_grid(R"([{"confidenceThreshold": 0.5}, {"measure": "path"}])");
  ASSERT_EQ(grid.size(), 2u);
  EXPECT_EQ(grid[0].confidence_threshold, 0.5);
  EXPECT_EQ(grid[1].measure, Measure::path);
  EXPECT_THROW(parse_sweep_grid("{}"), ParseError);
  EXPECT_THROW(parse_sweep_grid(R"([{"labelWeight": 0.2}])"), ValidationError);
}
