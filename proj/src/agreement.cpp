#include "semmatch/agreement.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace semmatch {

using nlohmann::json;

std::string_view to_string(PeerVerdict v) {
  switch (v) {
    case PeerVerdict::exactAgree: return "exactAgree";
    case PeerVerdict::similar: return "similar";
    case PeerVerdict::nonSimilar: return "nonSimilar";
  }
  return "nonSimilar";
}

PeerVerdict parse_peer_verdict(std::string_view s) {
  if (s == "exactAgree") return PeerVerdict::exactAgree;
  if (s == "similar") return PeerVerdict::similar;
  if (s == "nonSimilar") return PeerVerdict::nonSimilar;
  throw ValidationError("unknown peer verdict '" + std::string(s) + "'");
}

void PhaseTwoConfig::validate() const {
  if (!(exact_floor >= 0.0 && exact_floor <= 1.0 && similar_floor >= 0.0 &&
        similar_floor <= 1.0))
    throw ValidationError("phase-two floors must lie in [0,1]");
}

json PeerMatchResult::to_json() const {
  return {{"requesterId", requester_id},
          {"providerId", provider_id},
          {"overlapScore", overlap_score},
          {"verdict", to_string(verdict)},
          {"sharedTargets", shared_targets}};
}

PeerMatchResult PeerMatchResult::from_json(const json& j) {
  PeerMatchResult r;
  r.requester_id = j.at("requesterId").get<std::string>();
  r.provider_id = j.at("providerId").get<std::string>();
  r.overlap_score = j.at("overlapScore").get<double>();
  r.verdict = parse_peer_verdict(j.at("verdict").get<std::string>());
  r.shared_targets = j.at("sharedTargets").get<std::vector<std::string>>();
  return r;
}

json FullAgreement::to_json() const {
  json links_json = json::array();
  for (const auto& l : links)
    links_json.push_back({{"sourceRef", l.source_ref},
                          {"targetRef", l.target_ref},
                          {"confidence", l.confidence},
                          {"via", l.via}});
  return {{"requesterId", requester_id},
          {"providerId", provider_id},
          {"links", std::move(links_json)}};
}

std::string FullAgreement::serialize() const { return to_json().dump(2) + "\n"; }

FullAgreement FullAgreement::from_json(const json& j) {
  try {
    FullAgreement f;
    f.requester_id = j.at("requesterId").get<std::string>();
    f.provider_id = j.at("providerId").get<std::string>();
    for (const auto& jl : j.at("links"))
      f.links.push_back({jl.at("sourceRef").get<std::string>(),
                         jl.at("targetRef").get<std::string>(),
                         jl.at("confidence").get<double>(), jl.at("via").get<std::string>()});
    return f;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("full agreement: ") + e.what());
  }
}

namespace {

void require_same_ontology(const HalfAgreement& a, const HalfAgreement& b) {
  if (a.common_ontology_id != b.common_ontology_id)
    throw ValidationError("half agreements reference different common ontologies ('" +
                          a.common_ontology_id + "' vs '" + b.common_ontology_id + "')");
}

// Best confidence per common-ontology target.
std::map<std::string, double> by_target(const HalfAgreement& h) {
  std::map<std::string, double> out;
  for (const auto& u : h.units) {
    auto [it, fresh] = out.emplace(u.target_ref, u.confidence);
    if (!fresh) it->second = std::max(it->second, u.confidence);
  }
  return out;
}

}  // namespace

PeerMatchResult compare_half_agreements(const HalfAgreement& req, const HalfAgreement& prov,
                                        const PhaseTwoConfig& cfg) {
  require_same_ontology(req, prov);
  cfg.validate();
  PeerMatchResult r;
  r.requester_id = req.peer_id;
  r.provider_id = prov.peer_id;

  auto wanted = by_target(req);
  auto offered = by_target(prov);
  // Numerator and denominator accumulate in the same order so that a
  // self-comparison yields exactly 1.
  double covered = 0.0, total = 0.0;
  for (const auto& [target, conf] : wanted) {
    total += conf;
    auto it = offered.find(target);
    if (it == offered.end()) continue;
    covered += std::min(conf, it->second);
    r.shared_targets.push_back(target);
  }
  r.overlap_score = total > 0.0 ? std::clamp(covered / total, 0.0, 1.0) : 0.0;
  if (r.overlap_score == 0.0) r.shared_targets.clear();

  bool all_shared = !wanted.empty() && r.shared_targets.size() == wanted.size();
  if (all_shared && r.overlap_score >= cfg.exact_floor)
    r.verdict = PeerVerdict::exactAgree;
  else if (r.overlap_score >= cfg.similar_floor && r.overlap_score > 0.0)
    r.verdict = PeerVerdict::similar;
  else
    r.verdict = PeerVerdict::nonSimilar;
  return r;
}

FullAgreement compose(const HalfAgreement& req, const HalfAgreement& prov) {
  require_same_ontology(req, prov);
  FullAgreement f;
  f.requester_id = req.peer_id;
  f.provider_id = prov.peer_id;

  std::multimap<std::string, const AgreementUnit*> offered;
  for (const auto& v : prov.units) offered.emplace(v.target_ref, &v);

  std::vector<Link> links;
  for (const auto& u : req.units) {
    auto [lo, hi] = offered.equal_range(u.target_ref);
    for (auto it = lo; it != hi; ++it) {
      const AgreementUnit& v = *it->second;
      links.push_back({u.source_ref, v.source_ref, std::min(u.confidence, v.confidence),
                       u.target_ref});
    }
  }
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return std::tie(a.source_ref, a.target_ref, a.via) <
           std::tie(b.source_ref, b.target_ref, b.via);
  });

  if (req.config.one_to_one && prov.config.one_to_one) {
    std::set<std::string> used_src, used_tgt;
    for (auto& l : links) {
      if (used_src.count(l.source_ref) || used_tgt.count(l.target_ref)) continue;
      used_src.insert(l.source_ref);
      used_tgt.insert(l.target_ref);
      f.links.push_back(std::move(l));
    }
  } else {
    f.links = std::move(links);
  }
  return f;
}

}  // namespace semmatch
