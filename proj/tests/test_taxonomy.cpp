#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "semmatch/taxonomy.hpp"

using namespace semmatch;

namespace {

// entity(1) -> vehicle(2) -> wheeled(3) -> {car(4), bicycle(4)}
// entity(1) -> animal(2) -> dog(3)
constexpr const char* kSmall = R"(
# tiny hierarchy
synset n.entity.01 | entity | | top
synset n.vehicle.01 | vehicle | n.entity.01 | conveyance
synset n.wheeled.01 | wheeled_vehicle | n.vehicle.01 | has wheels
synset n.car.01 | car,auto | n.wheeled.01 | four wheels
synset n.bicycle.01 | bicycle,bike | n.wheeled.01 | two wheels
synset n.animal.01 | animal,beast | n.entity.01 | living
synset n.dog.01 | dog | n.animal.01 | barks
synset n.hotdog.01 | dog,frank | n.entity.01 | sausage
)";

// b(2) under root, c(3) under b; m has parents c and root, so depth(m) = 2
// while its deepest subsumer with c is c itself.
constexpr const char* kDiamond = R"(
synset n.root.01 | root | | r
synset n.b.01 | bee | n.root.01 | b
synset n.c.01 | cee | n.b.01 | c
synset n.m.01 | em | n.c.01,n.root.01 | m
)";

Taxonomy small() { return Taxonomy::parse(kSmall); }

}  // namespace

TEST(TaxonomyLoad, DepthsFromRoot) {
  auto t = small();
  EXPECT_EQ(t.size(), 8u);
  EXPECT_EQ(t.depth("n.entity.01"), 1);
  EXPECT_EQ(t.depth("n.wheeled.01"), 3);
  EXPECT_EQ(t.depth("n.car.01"), 4);
  EXPECT_EQ(t.max_depth(), 4);
}

TEST(TaxonomyLoad, LemmasLowercasedAndIndexed) {
  auto t = Taxonomy::parse("synset n.a.01 | Alpha,BETA | | g\n");
  EXPECT_EQ(t.senses_of("alpha").size(), 1u);
  EXPECT_EQ(t.senses_of("Beta").size(), 1u);
  EXPECT_TRUE(t.senses_of("gamma").empty());
}

TEST(TaxonomyLoad, PolysemousLemmaHasAllSenses) {
  auto t = small();
  auto senses = t.senses_of("dog");
  ASSERT_EQ(senses.size(), 2u);
}

TEST(TaxonomyLoad, RejectsCycle) {
  EXPECT_THROW(Taxonomy::parse("synset n.a.01 | a | n.b.01 | x\nsynset n.b.01 | b | n.a.01 | y\n"),
               ValidationError);
}

TEST(TaxonomyLoad, RejectsSelfLoop) {
  EXPECT_THROW(Taxonomy::parse("synset n.a.01 | a | n.a.01 | x\n"), ValidationError);
}

TEST(TaxonomyLoad, RejectsDanglingHypernym) {
  EXPECT_THROW(Taxonomy::parse("synset n.a.01 | a | n.zzz.01 | x\n"), ValidationError);
}

TEST(TaxonomyLoad, RejectsDuplicateId) {
  EXPECT_THROW(Taxonomy::parse("synset n.a.01 | a | | x\nsynset n.a.01 | b | | y\n"),
               ValidationError);
}

TEST(TaxonomyLoad, ParseErrorCarriesLine) {
  try {
    Taxonomy::parse("synset n.a.01 | a | | x\nbogus line here\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(TaxonomyLoad, MissingFileIsIoError) {
  EXPECT_THROW(Taxonomy::load_file("/nonexistent/tax.tax"), IoError);
}

// Hand-computed: lcs(car, bicycle) = wheeled at depth 3, so wup = 6/8 and
// the path runs car-wheeled-bicycle (2 edges), path = 1/3.
TEST(TaxonomySimilarity, SiblingOracle) {
  auto t = small();
  EXPECT_EQ(t.lowest_common_subsumer("n.car.01", "n.bicycle.01"), "n.wheeled.01");
  EXPECT_DOUBLE_EQ(t.wup("n.car.01", "n.bicycle.01").value, 6.0 / 8.0);
  EXPECT_DOUBLE_EQ(t.path("n.car.01", "n.bicycle.01").value, 1.0 / 3.0);
}

// car(4) and dog(3) meet only at the root: wup = 2/7, path over 5 edges = 1/6.
TEST(TaxonomySimilarity, DistantOracle) {
  auto t = small();
  EXPECT_DOUBLE_EQ(t.wup("n.car.01", "n.dog.01").value, 2.0 / 7.0);
  EXPECT_DOUBLE_EQ(t.path("n.car.01", "n.dog.01").value, 1.0 / 6.0);
}

// Ancestor pair: wup(car, wheeled) = 6/7, path = 1/2.
TEST(TaxonomySimilarity, AncestorOracle) {
  auto t = small();
  EXPECT_DOUBLE_EQ(t.wup("n.car.01", "n.wheeled.01").value, 6.0 / 7.0);
  EXPECT_DOUBLE_EQ(t.path("n.car.01", "n.wheeled.01").value, 0.5);
}

TEST(TaxonomySimilarity, IdentityIsOne) {
  auto t = small();
  for (const auto& id : t.synset_ids()) {
    EXPECT_EQ(t.wup(id, id).value, 1.0);
    EXPECT_EQ(t.path(id, id).value, 1.0);
  }
}

// Shortest-root depth puts m at 2 while its subsumer c sits at 3; the plain
// ratio would be 6/5. The fallback measures depth through the subsumer:
// 2*3 / ((3+1) + (3+0)) = 6/7.
TEST(TaxonomySimilarity, MultipleInheritanceStaysBelowOne) {
  auto t = Taxonomy::parse(kDiamond);
  EXPECT_EQ(t.depth("n.m.01"), 2);
  double v = t.wup("n.m.01", "n.c.01").value;
  EXPECT_DOUBLE_EQ(v, 6.0 / 7.0);
  EXPECT_LT(v, 1.0);
}

TEST(TaxonomySimilarity, LemmaTakesMaxOverSenses) {
  auto t = small();
  // dog/bike: the animal sense gives 2/7, the sausage sense 2/6; max wins.
  EXPECT_DOUBLE_EQ(t.lemma_similarity("dog", "bike"), std::max(2.0 / 7.0, 2.0 / 6.0));
  EXPECT_DOUBLE_EQ(t.lemma_similarity("auto", "bike"), 0.75);
  EXPECT_DOUBLE_EQ(t.lemma_similarity("car", "auto"), 1.0);
}

TEST(TaxonomySimilarity, OutOfVocabularyFallback) {
  auto t = small();
  EXPECT_EQ(t.lemma_similarity("zorp", "ZORP"), 1.0);
  EXPECT_EQ(t.lemma_similarity("zorp", "car"), 0.0);
  EXPECT_EQ(t.lemma_similarity("zorp", "zorq"), 0.0);
  LemmaOptions opts;
  opts.edit_distance_fallback = true;
  EXPECT_DOUBLE_EQ(t.lemma_similarity("zorp", "zorq", opts), 0.75);
}

TEST(TaxonomySimilarity, EditSimilarity) {
  EXPECT_DOUBLE_EQ(edit_similarity("kitten", "sitting"), 1.0 - 3.0 / 7.0);
  EXPECT_DOUBLE_EQ(edit_similarity("", ""), 1.0);
  EXPECT_DOUBLE_EQ(edit_similarity("abc", "abc"), 1.0);
}

TEST(TaxonomySimilarity, MeasureNames) {
  EXPECT_EQ(parse_measure("wup"), Measure::wup);
  EXPECT_EQ(parse_measure("path"), Measure::path);
  EXPECT_THROW(parse_measure("lin"), ValidationError);
}

// Lemma similarity against an independent brute force over sense pairs.
TEST(BundledTaxonomy, LemmaMatchesSensePairMaximum) {
  const auto& t = bundled_taxonomy();
  auto lemmas = t.lemmas();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, lemmas.size() - 1);
  for (int n = 0; n < 2000; ++n) {
    const auto& a = lemmas[pick(rng)];
    const auto& b = lemmas[pick(rng)];
    for (Measure m : {Measure::wup, Measure::path}) {
      double best = 0.0;
      for (const auto& sa : t.senses_of(a))
        for (const auto& sb : t.senses_of(b)) best = std::max(best, t.similarity(sa, sb, m).value);
      EXPECT_EQ(t.lemma_similarity(a, b, {m, false}), best) << a << " / " << b;
    }
  }
}

TEST(BundledTaxonomy, AxiomsOnAllPairs) {
  const auto& t = bundled_taxonomy();
  auto ids = t.synset_ids();
  for (const auto& a : ids)
    for (const auto& b : ids)
      for (Measure m : {Measure::wup, Measure::path}) {
        double ab = t.similarity(a, b, m).value;
        ASSERT_GE(ab, 0.0);
        ASSERT_LE(ab, 1.0);
        ASSERT_EQ(ab, t.similarity(b, a, m).value) << a << " " << b;
        if (a != b) ASSERT_LT(ab, 1.0) << a << " " << b;
      }
}

TEST(BundledTaxonomy, KnownFixtureVocabulary) {
  const auto& t = bundled_taxonomy();
  EXPECT_EQ(t.lemma_similarity("po", "order"), 1.0);
  EXPECT_EQ(t.lemma_similarity("price", "cost"), 1.0);
  EXPECT_TRUE(t.senses_of("interstate").empty());
  EXPECT_TRUE(t.senses_of("pedestrian").empty());
  EXPECT_EQ(t.senses_of("bill").size(), 3u);
}

TEST(BundledTaxonomy, ExtensionConcatenates) {
  std::string text(bundled_taxonomy_text());
  text += "\nsynset n.extra.01 | extra | n.entity.01 | added\n";
  auto t = Taxonomy::parse(text);
  EXPECT_EQ(t.size(), bundled_taxonomy().size() + 1);
  EXPECT_EQ(t.depth("n.extra.01"), 2);
}
