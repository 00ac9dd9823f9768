#include <gtest/gtest.h>

#include "semmatch/agreement.hpp"

using namespace semmatch;

namespace {

const std::string kData = SEMMATCH_DATA_DIR;

AgreementUnit unit(std::string src, std::string tgt, double conf) {
  AgreementUnit u;
  u.source_ref = std::move(src);
  u.target_ref = std::move(tgt);
  u.label_score = conf;
  u.external_score = conf;
  u.confidence = conf;
  u.verdict = conf >= 0.9 ? Verdict::exact : Verdict::similar;
  return u;
}

HalfAgreement half(std::string peer, std::vector<AgreementUnit> units, std::string co = "co") {
  HalfAgreement h;
  h.peer_id = peer;
  h.schema_id = peer + "-schema";
  h.common_ontology_id = std::move(co);
  h.units = std::move(units);
  return h;
}

}  // namespace

// covered = min(.9,.95) = .9 over total = .9 + .8 = 1.7.
TEST(Compare, PartialOverlapArithmetic) {
  auto req = half("r", {unit("a", "T1", 0.9), unit("b", "T2", 0.8)});
  auto prov = half("p", {unit("x", "T1", 0.95), unit("y", "T3", 0.8)});
  auto r = compare_half_agreements(req, prov);
  EXPECT_DOUBLE_EQ(r.overlap_score, 0.9 / 1.7);
  EXPECT_EQ(r.verdict, PeerVerdict::similar);
  EXPECT_EQ(r.shared_targets, (std::vector<std::string>{"T1"}));
}

TEST(Compare, AllSharedHighOverlapIsExactAgree) {
  auto req = half("r", {unit("a", "T1", 0.9), unit("b", "T2", 0.8)});
  auto prov = half("p", {unit("x", "T1", 0.9), unit("y", "T2", 0.76)});
  auto r = compare_half_agreements(req, prov);
  EXPECT_DOUBLE_EQ(r.overlap_score, (0.9 + 0.76) / 1.7);
  EXPECT_EQ(r.verdict, PeerVerdict::exactAgree);
}

TEST(Compare, DisjointIsNonSimilar) {
  auto req = half("r", {unit("a", "T1", 0.9)});
  auto prov = half("p", {unit("x", "T9", 0.9)});
  auto r = compare_half_agreements(req, prov);
  EXPECT_EQ(r.overlap_score, 0.0);
  EXPECT_EQ(r.verdict, PeerVerdict::nonSimilar);
  EXPECT_TRUE(r.shared_targets.empty());
}

TEST(Compare, EmptyRequesterIsNonSimilar) {
  auto r = compare_half_agreements(half("r", {}), half("p", {unit("x", "T1", 1.0)}));
  EXPECT_EQ(r.overlap_score, 0.0);
  EXPECT_EQ(r.verdict, PeerVerdict::nonSimilar);
}

TEST(Compare, SelfIsExactlyOne) {
  auto h = half("r", {unit("a", "T1", 0.91), unit("b", "T2", 0.77), unit("c", "T3", 0.83)});
  auto r = compare_half_agreements(h, h);
  EXPECT_EQ(r.overlap_score, 1.0);
  EXPECT_EQ(r.verdict, PeerVerdict::exactAgree);
}

TEST(Compare, FloorsAreConfigurable) {
  auto req = half("r", {unit("a", "T1", 0.9), unit("b", "T2", 0.8)});
  auto prov = half("p", {unit("x", "T1", 0.95)});
  PhaseTwoConfig strict{0.9, 0.6};
  EXPECT_EQ(compare_half_agreements(req, prov, strict).verdict, PeerVerdict::nonSimilar);
  PhaseTwoConfig bad{1.5, 0.5};
  EXPECT_THROW(compare_half_agreements(req, prov, bad), ValidationError);
}

TEST(Compare, DifferentOntologiesRejected) {
  EXPECT_THROW(compare_half_agreements(half("r", {}, "co-a"), half("p", {}, "co-b")),
               ValidationError);
  EXPECT_THROW(compose(half("r", {}, "co-a"), half("p", {}, "co-b")), ValidationError);
}

TEST(Compose, MinRuleThroughSharedTarget) {
  auto req = half("r", {unit("a", "T1", 0.9), unit("b", "T2", 0.8)});
  auto prov = half("p", {unit("x", "T1", 0.95), unit("y", "T3", 0.8)});
  auto f = compose(req, prov);
  ASSERT_EQ(f.links.size(), 1u);
  EXPECT_EQ(f.links[0].source_ref, "a");
  EXPECT_EQ(f.links[0].target_ref, "x");
  EXPECT_EQ(f.links[0].via, "T1");
  EXPECT_DOUBLE_EQ(f.links[0].confidence, 0.9);
}

TEST(Compose, OneToOneKeepsStrongestLinks) {
  auto req = half("r", {unit("a", "T1", 0.9), unit("b", "T1", 0.8)});
  auto prov = half("p", {unit("x", "T1", 0.95), unit("y", "T1", 0.85)});
  req.config.one_to_one = prov.config.one_to_one = true;
  auto f = compose(req, prov);
  // Candidates: a-x .9, a-y .85, b-x .8, b-y .8. Greedy keeps a-x then b-y.
  ASSERT_EQ(f.links.size(), 2u);
  EXPECT_EQ(f.links[0].source_ref, "a");
  EXPECT_EQ(f.links[0].target_ref, "x");
  EXPECT_EQ(f.links[1].source_ref, "b");
  EXPECT_EQ(f.links[1].target_ref, "y");

  req.config.one_to_one = false;
  EXPECT_EQ(compose(req, prov).links.size(), 4u);
}

TEST(Compose, SelfIsIdentity) {
  auto h = half("r", {unit("a", "T1", 0.91), unit("b", "T2", 0.77)});
  auto f = compose(h, h);
  ASSERT_EQ(f.links.size(), 2u);
  for (const auto& l : f.links) EXPECT_EQ(l.source_ref, l.target_ref);
}

TEST(Compose, LinkConfidenceNeverExceedsEitherSide) {
  auto tax_h = [](std::string peer) {
    return half(peer, {unit(peer + "1", "A", 0.8), unit(peer + "2", "B", 0.95),
                       unit(peer + "3", "C", 0.76)});
  };
  auto req = tax_h("r"), prov = tax_h("p");
  prov.units[0].confidence = 0.99;
  auto f = compose(req, prov);
  for (const auto& l : f.links) {
    double rc = 0, pc = 0;
    for (const auto& u : req.units)
      if (u.source_ref == l.source_ref) rc = u.confidence;
    for (const auto& u : prov.units)
      if (u.source_ref == l.target_ref) pc = u.confidence;
    EXPECT_EQ(l.confidence, std::min(rc, pc));
  }
}

TEST(AgreementJson, RoundTrips) {
  auto req = half("r", {unit("a", "T1", 0.9)});
  auto prov = half("p", {unit("x", "T1", 0.95)});
  auto f = compose(req, prov);
  EXPECT_EQ(FullAgreement::from_json(f.to_json()), f);
  auto r = compare_half_agreements(req, prov);
  EXPECT_EQ(PeerMatchResult::from_json(r.to_json()), r);
}
