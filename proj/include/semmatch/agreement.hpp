#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "semmatch/matcher.hpp"

namespace semmatch {

enum class PeerVerdict { exactAgree, similar, nonSimilar };

std::string_view to_string(PeerVerdict v);
PeerVerdict parse_peer_verdict(std::string_view s);

struct PhaseTwoConfig {
  double exact_floor = 0.9;
  double similar_floor = 0.5;

  void validate() const;
};

struct PeerMatchResult {
  std::string requester_id;
  std::string provider_id;
  double overlap_score = 0.0;
  PeerVerdict verdict = PeerVerdict::nonSimilar;
  std::vector<std::string> shared_targets;

  nlohmann::json to_json() const;
  static PeerMatchResult from_json(const nlohmann::json& j);
  bool operator==(const PeerMatchResult&) const = default;
};

struct Link {
  std::string source_ref;
  std::string target_ref;
  double confidence = 0.0;
  std::string via;

  bool operator==(const Link&) const = default;
};

struct FullAgreement {
  std::string requester_id;
  std::string provider_id;
  std::vector<Link> links;

  nlohmann::json to_json() const;
  std::string serialize() const;
  static FullAgreement from_json(const nlohmann::json& j);
  bool operator==(const FullAgreement&) const = default;
};

// How much of what the requester mapped the provider also covers:
// sum over shared common-ontology targets of min(req, prov) confidence,
// divided by the requester's total confidence.
PeerMatchResult compare_half_agreements(const HalfAgreement& req, const HalfAgreement& prov,
                                        const PhaseTwoConfig& cfg = {});

// Mapping composition through shared common-ontology targets.
FullAgreement compose(const HalfAgreement& req, const HalfAgreement& prov);

}  // namespace semmatch
