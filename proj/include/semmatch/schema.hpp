#pragma once

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "semmatch/error.hpp"

namespace semmatch {

enum class SchemaKind { exportSchema, commonOntology };

std::string_view to_string(SchemaKind k);
SchemaKind parse_schema_kind(std::string_view s);

struct Attribute {
  std::string name;
  std::optional<std::string> type_hint;

  bool operator==(const Attribute&) const = default;
};

struct Concept {
  std::string id;
  std::string label;
  std::vector<Attribute> attributes;
  std::vector<std::string> superclasses;

  bool operator==(const Concept&) const = default;
};

// A matchable endpoint: a concept (ref = concept id) or one of its
// attributes (ref = "<concept id>.<attribute name>").
struct Endpoint {
  std::string ref;
  std::string label;
  std::string concept_id;
  std::optional<std::size_t> attribute;

  bool is_attribute() const { return attribute.has_value(); }
};

// A peer export schema or the common ontology. Immutable once built; the
// constructor validates every invariant.
class Schema {
 public:
  Schema(std::string id, SchemaKind kind, std::vector<std::string> metadata,
         std::vector<Concept> concepts);

  static Schema from_json(const nlohmann::json& doc);
  static Schema parse(std::string_view text);
  static Schema load(std::istream& in);
  static Schema load_file(const std::string& path);

  // Canonical form: sorted keys, concepts ordered by id.
  nlohmann::json to_json() const;
  std::string serialize() const;

  const std::string& id() const { return id_; }
  SchemaKind kind() const { return kind_; }
  const std::vector<std::string>& metadata() const { return metadata_; }
  const std::map<std::string, Concept>& concepts() const { return concepts_; }

  bool has_concept(std::string_view id) const;
  const Concept& concept_at(std::string_view id) const;

  // Transitive superclasses of c, excluding c.
  std::set<std::string> superclass_closure(std::string_view concept_id) const;

  // Direct attributes of c in declaration order, as (attribute, owner label).
  std::vector<std::pair<std::string, std::string>> attribute_concepts(
      std::string_view concept_id) const;

  // Concept endpoints in id order, then attribute endpoints in
  // (concept id, declaration) order.
  std::vector<Endpoint> concept_endpoints() const;
  std::vector<Endpoint> attribute_endpoints() const;

  bool resolves(std::string_view ref) const;
  Endpoint resolve(std::string_view ref) const;

  bool operator==(const Schema&) const = default;

 private:
  std::string id_;
  SchemaKind kind_;
  std::vector<std::string> metadata_;
  std::map<std::string, Concept> concepts_;
};

}  // namespace semmatch
