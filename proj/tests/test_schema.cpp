#include <gtest/gtest.h>

#include "semmatch/schema.hpp"

using namespace semmatch;

namespace {

const std::string kData = SEMMATCH_DATA_DIR;

constexpr const char* kDoc = R"({
  "id": "s1",
  "kind": "exportSchema",
  "metadata": ["Order", "purchase", "order"],
  "concepts": [
    {"id": "Item", "label": "Item", "attributes": ["Quantity", {"name": "Price", "typeHint": "decimal"}],
     "superclasses": ["PO"]},
    {"id": "PO", "attributes": [], "superclasses": []}
  ]
})";

Concept concept_of(std::string id, std::vector<std::string> supers = {},
                   std::vector<std::string> attrs = {}) {
  Concept c;
  c.id = id;
  c.label = id;
  for (auto& a : attrs) c.attributes.push_back({a, std::nullopt});
  c.superclasses = std::move(supers);
  return c;
}

}  // namespace

TEST(Schema, ParsesAndDefaultsLabel) {
  auto s = Schema::parse(kDoc);
  EXPECT_EQ(s.id(), "s1");
  EXPECT_EQ(s.kind(), SchemaKind::exportSchema);
  EXPECT_EQ(s.concept_at("PO").label, "PO");
  ASSERT_EQ(s.concept_at("Item").attributes.size(), 2u);
  EXPECT_FALSE(s.concept_at("Item").attributes[0].type_hint.has_value());
  EXPECT_EQ(s.concept_at("Item").attributes[1].type_hint.value(), "decimal");
}

TEST(Schema, MetadataNormalized) {
  auto s = Schema::parse(kDoc);
  EXPECT_EQ(s.metadata(), (std::vector<std::string>{"order", "purchase"}));
}

TEST(Schema, RoundTripIsCanonical) {
  auto s = Schema::parse(kDoc);
  auto again = Schema::parse(s.serialize());
  EXPECT_EQ(s, again);
  EXPECT_EQ(s.serialize(), again.serialize());
}

TEST(Schema, ResolvesConceptAndAttributeRefs) {
  auto s = Schema::parse(kDoc);
  auto c = s.resolve("Item");
  EXPECT_FALSE(c.is_attribute());
  auto a = s.resolve("Item.Price");
  ASSERT_TRUE(a.is_attribute());
  EXPECT_EQ(a.concept_id, "Item");
  EXPECT_EQ(a.label, "Price");
  EXPECT_FALSE(s.resolves("Item.Colour"));
  EXPECT_FALSE(s.resolves("Nope"));
  EXPECT_THROW(s.resolve("Nope"), ValidationError);
}

TEST(Schema, DottedConceptIdsResolve) {
  Schema s("d", SchemaKind::exportSchema, {},
           {concept_of("a.b", {}, {"c"}), concept_of("a", {}, {"b"})});
  EXPECT_FALSE(s.resolve("a.b").is_attribute());
  auto e = s.resolve("a.b.c");
  ASSERT_TRUE(e.is_attribute());
  EXPECT_EQ(e.concept_id, "a.b");
}

TEST(Schema, SuperclassClosure) {
  Schema s("c", SchemaKind::exportSchema, {},
           {concept_of("A"), concept_of("B", {"A"}), concept_of("C", {"B"}),
            concept_of("D", {"C", "A"})});
  EXPECT_EQ(s.superclass_closure("D"), (std::set<std::string>{"A", "B", "C"}));
  EXPECT_TRUE(s.superclass_closure("A").empty());
}

TEST(Schema, EndpointsCoverConceptsAndAttributes) {
  auto s = Schema::parse(kDoc);
  EXPECT_EQ(s.concept_endpoints().size(), 2u);
  auto attrs = s.attribute_endpoints();
  ASSERT_EQ(attrs.size(), 2u);
  EXPECT_EQ(attrs[0].ref, "Item.Quantity");
  EXPECT_EQ(attrs[1].ref, "Item.Price");
}

TEST(SchemaValidation, RejectsCycle) {
  EXPECT_THROW(Schema("x", SchemaKind::exportSchema, {},
                      {concept_of("A", {"B"}), concept_of("B", {"A"})}),
               ValidationError);
}

TEST(SchemaValidation, RejectsDanglingSuperclass) {
  EXPECT_THROW(Schema("x", SchemaKind::exportSchema, {}, {concept_of("A", {"Z"})}),
               ValidationError);
}

TEST(SchemaValidation, RejectsDuplicateConceptAndAttribute) {
  EXPECT_THROW(Schema("x", SchemaKind::exportSchema, {}, {concept_of("A"), concept_of("A")}),
               ValidationError);
  EXPECT_THROW(Schema("x", SchemaKind::exportSchema, {}, {concept_of("A", {}, {"n", "n"})}),
               ValidationError);
}

TEST(SchemaValidation, RejectsEmptyLabel) {
  auto c = concept_of("A");
  c.label = "";
  EXPECT_THROW(Schema("x", SchemaKind::exportSchema, {}, {c}), ValidationError);
}

TEST(SchemaValidation, BadJsonIsParseError) {
  EXPECT_THROW(Schema::parse("{not json"), ParseError);
  EXPECT_THROW(Schema::parse(R"({"id": "x", "kind": "weird", "concepts": []})"), Error);
}

TEST(SchemaValidation, MissingFileIsIoError) {
  EXPECT_THROW(Schema::load_file("/nonexistent/schema.json"), IoError);
}

TEST(SchemaFixtures, AllBundledSchemasLoad) {
  for (const char* name : {"purchase", "business_flat", "transport", "publication"}) {
    auto e = Schema::load_file(kData + "/fixtures/" + name + "/export.json");
    auto c = Schema::load_file(kData + "/fixtures/" + name + "/co.json");
    EXPECT_EQ(e.kind(), SchemaKind::exportSchema) << name;
    EXPECT_EQ(c.kind(), SchemaKind::commonOntology) << name;
  }
}
