#include "semmatch/schema.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "semmatch/taxonomy.hpp"

namespace semmatch {

using nlohmann::json;

std::string_view to_string(SchemaKind k) {
  return k == SchemaKind::exportSchema ? "exportSchema" : "commonOntology";
}

SchemaKind parse_schema_kind(std::string_view s) {
  if (s == "exportSchema") return SchemaKind::exportSchema;
  if (s == "commonOntology") return SchemaKind::commonOntology;
  throw ValidationError("unknown schema kind '" + std::string(s) +
                        "' (expected exportSchema or commonOntology)");
}

Schema::Schema(std::string id, SchemaKind kind, std::vector<std::string> metadata,
               std::vector<Concept> concepts)
    : id_(std::move(id)), kind_(kind) {
  if (id_.empty()) throw ValidationError("schema id is empty");
  if (concepts.empty()) throw ValidationError("schema '" + id_ + "' has no concepts");

  for (auto& kw : metadata) kw = to_lower(kw);
  std::sort(metadata.begin(), metadata.end());
  metadata.erase(std::unique(metadata.begin(), metadata.end()), metadata.end());
  metadata_ = std::move(metadata);

  for (auto& c : concepts) {
    if (c.id.empty()) throw ValidationError("concept with empty id in schema '" + id_ + "'");
    if (c.label.empty()) throw ValidationError("concept '" + c.id + "' has an empty label");
    std::set<std::string> names;
    for (const auto& a : c.attributes) {
      if (a.name.empty())
        throw ValidationError("concept '" + c.id + "' has an attribute with an empty name");
      if (!names.insert(a.name).second)
        throw ValidationError("concept '" + c.id + "' declares attribute '" + a.name + "' twice");
    }
    if (concepts_.count(c.id)) throw ValidationError("duplicate concept id '" + c.id + "'");
    auto cid = c.id;
    concepts_.emplace(std::move(cid), std::move(c));
  }
  for (const auto& [cid, c] : concepts_)
    for (const auto& sup : c.superclasses)
      if (!concepts_.count(sup))
        throw ValidationError("concept '" + cid + "' has dangling superclass '" + sup + "'");

  // Cycle check: a concept must not reach itself through superclass edges.
  for (const auto& [cid, c] : concepts_) {
    std::vector<std::string> stack(c.superclasses.begin(), c.superclasses.end());
    std::set<std::string> seen;
    while (!stack.empty()) {
      auto cur = std::move(stack.back());
      stack.pop_back();
      if (cur == cid) throw ValidationError("superclass cycle through concept '" + cid + "'");
      if (!seen.insert(cur).second) continue;
      const auto& sups = concepts_.at(cur).superclasses;
      stack.insert(stack.end(), sups.begin(), sups.end());
    }
  }
}

Schema Schema::from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw ParseError(0, "schema document must be a JSON object");
    std::vector<std::string> metadata;
    if (doc.contains("metadata"))
      metadata = doc.at("metadata").get<std::vector<std::string>>();
    std::vector<Concept> concepts;
    for (const auto& jc : doc.at("concepts")) {
      Concept c;
      c.id = jc.at("id").get<std::string>();
      c.label = jc.contains("label") ? jc.at("label").get<std::string>() : c.id;
      if (jc.contains("attributes")) {
        for (const auto& ja : jc.at("attributes")) {
          Attribute a;
          if (ja.is_string()) {
            a.name = ja.get<std::string>();
          } else {
            a.name = ja.at("name").get<std::string>();
            if (ja.contains("typeHint") && !ja.at("typeHint").is_null())
              a.type_hint = ja.at("typeHint").get<std::string>();
          }
          c.attributes.push_back(std::move(a));
        }
      }
      if (jc.contains("superclasses"))
        c.superclasses = jc.at("superclasses").get<std::vector<std::string>>();
      concepts.push_back(std::move(c));
    }
    return Schema(doc.at("id").get<std::string>(),
                  parse_schema_kind(doc.at("kind").get<std::string>()),
                  std::move(metadata), std::move(concepts));
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("schema: ") + e.what());
  }
}

Schema Schema::parse(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("schema: ") + e.what());
  }
  return from_json(doc);
}

Schema Schema::load(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Schema Schema::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file '" + path + "'");
  try {
    return load(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

json Schema::to_json() const {
  json concepts = json::array();
  for (const auto& [cid, c] : concepts_) {
    json attrs = json::array();
    for (const auto& a : c.attributes) {
      json ja{{"name", a.name}};
      if (a.type_hint) ja["typeHint"] = *a.type_hint;
      attrs.push_back(std::move(ja));
    }
    concepts.push_back({{"id", c.id},
                        {"label", c.label},
                        {"attributes", std::move(attrs)},
                        {"superclasses", c.superclasses}});
  }
  return {{"id", id_},
          {"kind", to_string(kind_)},
          {"metadata", metadata_},
          {"concepts", std::move(concepts)}};
}

std::string Schema::serialize() const { return to_json().dump(2) + "\n"; }

bool Schema::has_concept(std::string_view id) const {
  return concepts_.count(std::string(id)) > 0;
}

const Concept& Schema::concept_at(std::string_view id) const {
  auto it = concepts_.find(std::string(id));
  if (it == concepts_.end())
    throw ValidationError("unknown concept '" + std::string(id) + "' in schema '" + id_ + "'");
  return it->second;
}

std::set<std::string> Schema::superclass_closure(std::string_view concept_id) const {
  const Concept& start = concept_at(concept_id);
  std::set<std::string> out;
  std::vector<std::string> stack(start.superclasses.begin(), start.superclasses.end());
  while (!stack.empty()) {
    auto cur = std::move(stack.back());
    stack.pop_back();
    if (!out.insert(cur).second) continue;
    const auto& sups = concepts_.at(cur).superclasses;
    stack.insert(stack.end(), sups.begin(), sups.end());
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> Schema::attribute_concepts(
    std::string_view concept_id) const {
  const Concept& c = concept_at(concept_id);
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(c.attributes.size());
  for (const auto& a : c.attributes) out.emplace_back(a.name, c.label);
  return out;
}

std::vector<Endpoint> Schema::concept_endpoints() const {
  std::vector<Endpoint> out;
  for (const auto& [cid, c] : concepts_) out.push_back({cid, c.label, cid, std::nullopt});
  return out;
}

std::vector<Endpoint> Schema::attribute_endpoints() const {
  std::vector<Endpoint> out;
  for (const auto& [cid, c] : concepts_)
    for (std::size_t i = 0; i < c.attributes.size(); ++i)
      out.push_back({cid + "." + c.attributes[i].name, c.attributes[i].name, cid, i});
  return out;
}

bool Schema::resolves(std::string_view ref) const {
  try {
    resolve(ref);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

Endpoint Schema::resolve(std::string_view ref) const {
  std::string r(ref);
  if (auto it = concepts_.find(r); it != concepts_.end())
    return {r, it->second.label, r, std::nullopt};
  // Concept ids may contain '.', so try every split point, longest id first.
  for (auto dot = r.rfind('.'); dot != std::string::npos && dot > 0;
       dot = r.rfind('.', dot - 1)) {
    auto it = concepts_.find(r.substr(0, dot));
    if (it == concepts_.end()) continue;
    auto name = r.substr(dot + 1);
    const auto& attrs = it->second.attributes;
    for (std::size_t i = 0; i < attrs.size(); ++i)
      if (attrs[i].name == name) return {r, name, it->first, i};
  }
  throw ValidationError("reference '" + r + "' does not resolve in schema '" + id_ + "'");
}

}  // namespace semmatch
