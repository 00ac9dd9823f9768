#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "semmatch/schema.hpp"
#include "semmatch/taxonomy.hpp"

namespace semmatch {

enum class Verdict { exact, similar, nonSimilar };

std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view s);

struct MatchConfig {
  double label_threshold = 0.9;
  double external_threshold = 0.49;
  double confidence_threshold = 0.75;
  double label_weight = 0.7;
  double external_weight = 0.3;
  double internal_weight = 0.0;
  Measure measure = Measure::wup;
  bool one_to_one = true;
  // Empty superclass sets hand their external weight to the label score.
  bool flat_neutral = false;
  bool edit_distance_fallback = false;

  // Throws ValidationError when thresholds leave [0,1] or the weights are
  // negative or do not sum to 1.
  void validate() const;
  LemmaOptions lemma_options() const { return {measure, edit_distance_fallback}; }

  nlohmann::json to_json() const;
  // Missing fields keep the defaults of `base`.
  static MatchConfig from_json(const nlohmann::json& j, const MatchConfig& base);
  static MatchConfig from_json(const nlohmann::json& j);

  bool operator==(const MatchConfig&) const = default;
};

struct AgreementUnit {
  std::string source_ref;
  std::string target_ref;
  double label_score = 0.0;
  double external_score = 0.0;
  double internal_score = 0.0;
  double confidence = 0.0;
  Verdict verdict = Verdict::nonSimilar;

  nlohmann::json to_json() const;
  static AgreementUnit from_json(const nlohmann::json& j);
  bool operator==(const AgreementUnit&) const = default;
};

struct HalfAgreement {
  std::string peer_id;
  std::string schema_id;
  std::string common_ontology_id;
  std::vector<AgreementUnit> units;
  MatchConfig config;

  nlohmann::json to_json() const;
  std::string serialize() const;
  static HalfAgreement from_json(const nlohmann::json& j);
  static HalfAgreement parse(std::string_view text);
  static HalfAgreement load_file(const std::string& path);
  bool operator==(const HalfAgreement&) const = default;
};

struct Classification {
  double confidence = 0.0;
  Verdict verdict = Verdict::nonSimilar;
};

// Lowercase tokens split on non-alphanumerics, camel-case humps and
// letter/digit boundaries. "BillTo" -> {bill, to}, "PO2" -> {po, 2}.
std::vector<std::string> tokenize_label(std::string_view label);

using PairScore = std::function<double(std::size_t, std::size_t)>;

// Maximum-weight injective assignment between a items and b items, divided
// by max(a, b); 0 if either side is empty. Exhaustive for up to 7 items per
// side, Hungarian method beyond. The chosen scores are summed in descending
// order.
double best_assignment_score(std::size_t a, std::size_t b, const PairScore& score);

double label_similarity(const Taxonomy& tax, std::string_view l1, std::string_view l2,
                        const LemmaOptions& opts = {});

// Superclass label set used for external structure: the closure of a
// concept, or owner + owner's closure for an attribute. Sorted, unique.
std::vector<std::string> superclass_labels(const Schema& s, const Endpoint& e);

double external_similarity(const Taxonomy& tax, const Schema& s1, std::string_view ref1,
                           const Schema& s2, std::string_view ref2,
                           const LemmaOptions& opts = {});

// Attribute-name soft Jaccard; 0 for attribute refs.
double internal_similarity(const Taxonomy& tax, const Schema& s1, std::string_view ref1,
                           const Schema& s2, std::string_view ref2,
                           const LemmaOptions& opts = {});

// external_defined is false when either superclass set is empty; that only
// matters under cfg.flat_neutral.
Classification classify(double label_score, double external_score, double internal_score,
                        const MatchConfig& cfg, bool external_defined = true);

// Every concept<->concept and attribute<->attribute pair, scored and
// classified (nonSimilar included), in (sourceRef, targetRef) order.
std::vector<AgreementUnit> score_candidates(const Taxonomy& tax, const Schema& exported,
                                            const Schema& common, const MatchConfig& cfg);

// Orders units by (descending confidence, sourceRef, targetRef).
void sort_units(std::vector<AgreementUnit>& units);

HalfAgreement build_half_agreement(const Taxonomy& tax, const Schema& exported,
                                   const Schema& common, const MatchConfig& cfg = {},
                                   std::string peer_id = {});

}  // namespace semmatch
