#include "semmatch/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace semmatch {

using nlohmann::json;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::exact: return "exact";
    case Verdict::similar: return "similar";
    case Verdict::nonSimilar: return "nonSimilar";
  }
  return "nonSimilar";
}

Verdict parse_verdict(std::string_view s) {
  if (s == "exact") return Verdict::exact;
  if (s == "similar") return Verdict::similar;
  if (s == "nonSimilar") return Verdict::nonSimilar;
  throw ValidationError("unknown verdict '" + std::string(s) + "'");
}

void MatchConfig::validate() const {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
      throw ValidationError(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
  };
  unit(label_threshold, "labelThreshold");
  unit(external_threshold, "externalThreshold");
  unit(confidence_threshold, "confidenceThreshold");
  for (auto [w, name] : {std::pair{label_weight, "labelWeight"},
                         std::pair{external_weight, "externalWeight"},
                         std::pair{internal_weight, "internalWeight"}})
    if (!(w >= 0.0)) throw ValidationError(std::string(name) + " must be non-negative");
  double sum = label_weight + external_weight + internal_weight;
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError("weights must sum to 1, got " + std::to_string(sum));
}

json MatchConfig::to_json() const {
  return {{"labelThreshold", label_threshold},
          {"externalThreshold", external_threshold},
          {"confidenceThreshold", confidence_threshold},
          {"labelWeight", label_weight},
          {"externalWeight", external_weight},
          {"internalWeight", internal_weight},
          {"measure", to_string(measure)},
          {"oneToOne", one_to_one},
          {"flatNeutral", flat_neutral},
          {"editDistanceFallback", edit_distance_fallback}};
}

MatchConfig MatchConfig::from_json(const json& j, const MatchConfig& base) {
  MatchConfig c = base;
  try {
    if (!j.is_object()) throw ParseError(0, "match config must be a JSON object");
    auto num = [&](const char* key, double& out) {
      if (j.contains(key)) out = j.at(key).get<double>();
    };
    auto flag = [&](const char* key, bool& out) {
      if (j.contains(key)) out = j.at(key).get<bool>();
    };
    num("labelThreshold", c.label_threshold);
    num("externalThreshold", c.external_threshold);
    num("confidenceThreshold", c.confidence_threshold);
    num("labelWeight", c.label_weight);
    num("externalWeight", c.external_weight);
    num("internalWeight", c.internal_weight);
    if (j.contains("measure")) c.measure = parse_measure(j.at("measure").get<std::string>());
    flag("oneToOne", c.one_to_one);
    flag("flatNeutral", c.flat_neutral);
    flag("editDistanceFallback", c.edit_distance_fallback);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("match config: ") + e.what());
  }
  return c;
}

MatchConfig MatchConfig::from_json(const json& j) { return from_json(j, MatchConfig{}); }

json AgreementUnit::to_json() const {
  return {{"sourceRef", source_ref},     {"targetRef", target_ref},
          {"labelScore", label_score},   {"externalScore", external_score},
          {"internalScore", internal_score}, {"confidence", confidence},
          {"verdict", to_string(verdict)}};
}

AgreementUnit AgreementUnit::from_json(const json& j) {
  AgreementUnit u;
  u.source_ref = j.at("sourceRef").get<std::string>();
  u.target_ref = j.at("targetRef").get<std::string>();
  u.label_score = j.value("labelScore", 0.0);
  u.external_score = j.value("externalScore", 0.0);
  u.internal_score = j.value("internalScore", 0.0);
  u.confidence = j.at("confidence").get<double>();
  u.verdict = parse_verdict(j.at("verdict").get<std::string>());
  return u;
}

json HalfAgreement::to_json() const {
  json units_json = json::array();
  for (const auto& u : units) units_json.push_back(u.to_json());
  return {{"peerId", peer_id},
          {"schemaId", schema_id},
          {"commonOntologyId", common_ontology_id},
          {"config", config.to_json()},
          {"units", std::move(units_json)}};
}

std::string HalfAgreement::serialize() const { return to_json().dump(2) + "\n"; }

HalfAgreement HalfAgreement::from_json(const json& j) {
  try {
    HalfAgreement h;
    h.peer_id = j.at("peerId").get<std::string>();
    h.schema_id = j.at("schemaId").get<std::string>();
    h.common_ontology_id = j.at("commonOntologyId").get<std::string>();
    if (j.contains("config")) h.config = MatchConfig::from_json(j.at("config"));
    for (const auto& ju : j.at("units")) h.units.push_back(AgreementUnit::from_json(ju));
    return h;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("half agreement: ") + e.what());
  }
}

HalfAgreement HalfAgreement::parse(std::string_view text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("half agreement: ") + e.what());
  }
}

HalfAgreement HalfAgreement::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open half agreement file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

namespace {
constexpr std::size_t kExhaustiveLimit = 7;

double canonical_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}
}  // namespace

double best_assignment_score(std::size_t a, std::size_t b, const PairScore& score) {
  if (a == 0 || b == 0) return 0.0;
  // Rows are the smaller side. Shortest augmenting paths with potentials,
  // minimizing negated scores; 1-based with column 0 as the virtual source.
  bool transpose = a > b;
  std::size_t n = std::min(a, b), m = std::max(a, b);
  std::vector<std::vector<double>> w(n + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      w[i][j] = transpose ? score(j - 1, i - 1) : score(i - 1, j - 1);

  // Small instances are searched exhaustively. Either way the chosen scores
  // are summed largest first, so the result depends only on which values
  // were picked and not on side order.
  std::vector<double> picked(n);
  if (m <= kExhaustiveLimit) {
    std::vector<bool> taken(m + 1, false);
    std::vector<double> cur(n);
    double best = 0.0;
    std::function<void(std::size_t)> search = [&](std::size_t i) {
      if (i > n) {
        best = std::max(best, canonical_sum(cur));
        return;
      }
      for (std::size_t j = 1; j <= m; ++j) {
        if (taken[j]) continue;
        taken[j] = true;
        cur[i - 1] = w[i][j];
        search(i + 1);
        taken[j] = false;
      }
    };
    search(1);
    return best / static_cast<double>(m);
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> row_of(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = row_of[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = -w[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of(n + 1, 0);
  for (std::size_t j = 1; j <= m; ++j)
    if (row_of[j]) col_of[row_of[j]] = j;
  for (std::size_t i = 1; i <= n; ++i) picked[i - 1] = w[i][col_of[i]];
  return canonical_sum(picked) / static_cast<double>(m);
}

namespace {

// Memoizes lemma and label scores over one matching run.
class Scorer {
 public:
  Scorer(const Taxonomy& tax, const LemmaOptions& opts) : tax_(tax), opts_(opts) {}

  double lemma(const std::string& a, const std::string& b) {
    auto key = a < b ? std::pair{a, b} : std::pair{b, a};
    auto it = lemmas_.find(key);
    if (it != lemmas_.end()) return it->second;
    double v = tax_.lemma_similarity(a, b, opts_);
    lemmas_.emplace(std::move(key), v);
    return v;
  }

  double label(const std::string& l1, const std::string& l2) {
    auto key = l1 < l2 ? std::pair{l1, l2} : std::pair{l2, l1};
    auto it = labels_.find(key);
    if (it != labels_.end()) return it->second;
    // Canonical side order keeps the floating-point sum, and so the score,
    // independent of argument order.
    const auto& t1 = tokens(key.first);
    const auto& t2 = tokens(key.second);
    double v;
    if (t1.empty() && t2.empty()) {
      v = to_lower(l1) == to_lower(l2) ? 1.0 : 0.0;
    } else {
      v = best_assignment_score(t1.size(), t2.size(), [&](std::size_t i, std::size_t j) {
        return lemma(t1[i], t2[j]);
      });
    }
    labels_.emplace(std::move(key), v);
    return v;
  }

  double sets(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    bool swap = b < a;
    const auto& x = swap ? b : a;
    const auto& y = swap ? a : b;
    return best_assignment_score(x.size(), y.size(), [&](std::size_t i, std::size_t j) {
      return label(x[i], y[j]);
    });
  }

 private:
  const std::vector<std::string>& tokens(const std::string& label) {
    auto it = tokens_.find(label);
    if (it == tokens_.end()) it = tokens_.emplace(label, tokenize_label(label)).first;
    return it->second;
  }

  const Taxonomy& tax_;
  LemmaOptions opts_;
  std::map<std::pair<std::string, std::string>, double> lemmas_;
  std::map<std::pair<std::string, std::string>, double> labels_;
  std::map<std::string, std::vector<std::string>> tokens_;
};

std::vector<std::string> attribute_names(const Schema& s, const Endpoint& e) {
  std::set<std::string> names;
  for (const auto& a : s.concept_at(e.concept_id).attributes) names.insert(a.name);
  return {names.begin(), names.end()};
}

}  // namespace

double label_similarity(const Taxonomy& tax, std::string_view l1, std::string_view l2,
                        const LemmaOptions& opts) {
  Scorer scorer(tax, opts);
  return scorer.label(std::string(l1), std::string(l2));
}

std::vector<std::string> superclass_labels(const Schema& s, const Endpoint& e) {
  std::set<std::string> labels;
  for (const auto& id : s.superclass_closure(e.concept_id))
    labels.insert(s.concept_at(id).label);
  if (e.is_attribute()) labels.insert(s.concept_at(e.concept_id).label);
  return {labels.begin(), labels.end()};
}

double external_similarity(const Taxonomy& tax, const Schema& s1, std::string_view ref1,
                           const Schema& s2, std::string_view ref2,
                           const LemmaOptions& opts) {
  auto a = superclass_labels(s1, s1.resolve(ref1));
  auto b = superclass_labels(s2, s2.resolve(ref2));
  Scorer scorer(tax, opts);
  return scorer.sets(a, b);
}

double internal_similarity(const Taxonomy& tax, const Schema& s1, std::string_view ref1,
                           const Schema& s2, std::string_view ref2,
                           const LemmaOptions& opts) {
  auto e1 = s1.resolve(ref1);
  auto e2 = s2.resolve(ref2);
  if (e1.is_attribute() || e2.is_attribute()) return 0.0;
  Scorer scorer(tax, opts);
  return scorer.sets(attribute_names(s1, e1), attribute_names(s2, e2));
}

Classification classify(double label_score, double external_score, double internal_score,
                        const MatchConfig& cfg, bool external_defined) {
  double lw = cfg.label_weight, ew = cfg.external_weight;
  if (cfg.flat_neutral && !external_defined) {
    lw += ew;
    ew = 0.0;
  }
  double confidence =
      lw * label_score + ew * external_score + cfg.internal_weight * internal_score;
  confidence = std::clamp(confidence, 0.0, 1.0);
  Verdict v = Verdict::nonSimilar;
  if (confidence >= cfg.confidence_threshold) {
    bool exact = label_score >= cfg.label_threshold &&
                 external_score >= cfg.external_threshold;
    v = exact ? Verdict::exact : Verdict::similar;
  }
  return {confidence, v};
}

std::vector<AgreementUnit> score_candidates(const Taxonomy& tax, const Schema& exported,
                                            const Schema& common, const MatchConfig& cfg) {
  cfg.validate();
  Scorer scorer(tax, cfg.lemma_options());
  std::vector<AgreementUnit> out;

  auto score_group = [&](const std::vector<Endpoint>& sources,
                         const std::vector<Endpoint>& targets) {
    std::vector<std::vector<std::string>> target_sups, target_attrs;
    for (const auto& t : targets) {
      target_sups.push_back(superclass_labels(common, t));
      target_attrs.push_back(t.is_attribute() ? std::vector<std::string>{}
                                              : attribute_names(common, t));
    }
    for (const auto& s : sources) {
      auto sups = superclass_labels(exported, s);
      auto attrs = s.is_attribute() ? std::vector<std::string>{} : attribute_names(exported, s);
      for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto& t = targets[k];
        AgreementUnit u;
        u.source_ref = s.ref;
        u.target_ref = t.ref;
        u.label_score = scorer.label(s.label, t.label);
        u.external_score = scorer.sets(sups, target_sups[k]);
        u.internal_score = s.is_attribute() ? 0.0 : scorer.sets(attrs, target_attrs[k]);
        bool defined = !sups.empty() && !target_sups[k].empty();
        auto c = classify(u.label_score, u.external_score, u.internal_score, cfg, defined);
        u.confidence = c.confidence;
        u.verdict = c.verdict;
        out.push_back(std::move(u));
      }
    }
  };
  score_group(exported.concept_endpoints(), common.concept_endpoints());
  score_group(exported.attribute_endpoints(), common.attribute_endpoints());

  std::sort(out.begin(), out.end(), [](const AgreementUnit& a, const AgreementUnit& b) {
    return std::tie(a.source_ref, a.target_ref) < std::tie(b.source_ref, b.target_ref);
  });
  return out;
}

void sort_units(std::vector<AgreementUnit>& units) {
  std::sort(units.begin(), units.end(), [](const AgreementUnit& a, const AgreementUnit& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return std::tie(a.source_ref, a.target_ref) < std::tie(b.source_ref, b.target_ref);
  });
}

HalfAgreement build_half_agreement(const Taxonomy& tax, const Schema& exported,
                                   const Schema& common, const MatchConfig& cfg,
                                   std::string peer_id) {
  if (exported.kind() != SchemaKind::exportSchema)
    throw ValidationError("schema '" + exported.id() + "' is not an export schema");
  if (common.kind() != SchemaKind::commonOntology)
    throw ValidationError("schema '" + common.id() + "' is not a common ontology");

  auto candidates = score_candidates(tax, exported, common, cfg);
  std::erase_if(candidates,
                [](const AgreementUnit& u) { return u.verdict == Verdict::nonSimilar; });
  sort_units(candidates);

  HalfAgreement h;
  h.peer_id = peer_id.empty() ? exported.id() : std::move(peer_id);
  h.schema_id = exported.id();
  h.common_ontology_id = common.id();
  h.config = cfg;
  if (!cfg.one_to_one) {
    h.units = std::move(candidates);
    return h;
  }
  std::set<std::string> used_sources, used_targets;
  for (auto& u : candidates) {
    if (used_sources.count(u.source_ref) || used_targets.count(u.target_ref)) continue;
    used_sources.insert(u.source_ref);
    used_targets.insert(u.target_ref);
    h.units.push_back(std::move(u));
  }
  return h;
}

}  // namespace semmatch
