#include "semmatch/evaluation.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace semmatch {

using nlohmann::json;

namespace {

std::string strip_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

GoldMapping GoldMapping::load(std::istream& in, std::string schema_pair_id) {
  GoldMapping g;
  g.schema_pair_id = std::move(schema_pair_id);
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw ParseError(line_no, "expected two tab-separated columns");
    auto src = line.substr(0, tab);
    auto tgt = line.substr(tab + 1);
    if (!header) {
      if (src != "sourceRef" || tgt != "targetRef")
        throw ParseError(line_no, "expected header 'sourceRef<TAB>targetRef'");
      header = true;
      continue;
    }
    if (src.empty() || tgt.empty()) throw ParseError(line_no, "empty reference");
    g.pairs.emplace(std::move(src), std::move(tgt));
  }
  if (!header) throw ParseError(0, "gold mapping has no header");
  if (g.pairs.empty()) throw ValidationError("gold mapping '" + g.schema_pair_id + "' is empty");
  return g;
}

GoldMapping GoldMapping::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gold mapping file '" + path + "'");
  try {
    return load(in, path);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

void check_gold(const GoldMapping& gold, const Schema& source, const Schema& target) {
  for (const auto& [s, t] : gold.pairs) {
    if (!source.resolves(s))
      throw ValidationError("gold ref '" + s + "' does not resolve in '" + source.id() + "'");
    if (!target.resolves(t))
      throw ValidationError("gold ref '" + t + "' does not resolve in '" + target.id() + "'");
  }
}

json EvalReport::to_json() const {
  return {{"found", found},         {"correct", correct}, {"incorrect", incorrect},
          {"missed", missed},       {"precision", precision}, {"recall", recall},
          {"fMeasure", f_measure}};
}

std::string EvalReport::to_table() const {
  std::ostringstream os;
  os << "found  correct  incorrect  missed  precision  recall    fMeasure\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-6zu %-8zu %-10zu %-7zu %-10s %-9s %s\n", found, correct,
                incorrect, missed, fmt_double(precision).c_str(), fmt_double(recall).c_str(),
                fmt_double(f_measure).c_str());
  os << buf;
  return os.str();
}

EvalReport evaluate(const std::set<RefPair>& produced, const GoldMapping& gold) {
  EvalReport r;
  r.found = produced.size();
  for (const auto& p : produced)
    if (gold.pairs.count(p)) ++r.correct;
  r.incorrect = r.found - r.correct;
  r.missed = gold.pairs.size() - r.correct;
  r.precision = r.found == 0 ? 1.0 : static_cast<double>(r.correct) / r.found;
  r.recall = gold.pairs.empty() ? 0.0 : static_cast<double>(r.correct) / gold.pairs.size();
  double pr = r.precision + r.recall;
  r.f_measure = pr == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / pr;
  return r;
}

EvalReport evaluate(const HalfAgreement& produced, const GoldMapping& gold) {
  std::set<RefPair> pairs;
  for (const auto& u : produced.units) pairs.emplace(u.source_ref, u.target_ref);
  return evaluate(pairs, gold);
}

EvalReport evaluate(const FullAgreement& produced, const GoldMapping& gold) {
  std::set<RefPair> pairs;
  for (const auto& l : produced.links) pairs.emplace(l.source_ref, l.target_ref);
  return evaluate(pairs, gold);
}

std::vector<SweepRow> threshold_sweep(const Taxonomy& tax, const Schema& exported,
                                      const Schema& common, const GoldMapping& gold,
                                      std::span<const MatchConfig> grid) {
  if (grid.empty()) throw ValidationError("sweep grid is empty");
  check_gold(gold, exported, common);
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const auto& cfg : grid)
    rows.push_back({cfg, evaluate(build_half_agreement(tax, exported, common, cfg), gold)});
  return rows;
}

std::vector<MatchConfig> default_sweep_grid(const MatchConfig& base) {
  std::vector<MatchConfig> grid;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    MatchConfig c = base;
    c.confidence_threshold = t;
    grid.push_back(c);
  }
  return grid;
}

std::vector<MatchConfig> parse_sweep_grid(std::string_view text, const MatchConfig& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("sweep grid: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError(0, "sweep grid must be a JSON array");
  std::vector<MatchConfig> grid;
  for (const auto& entry : doc) {
    auto c = MatchConfig::from_json(entry, base);
    c.validate();
    grid.push_back(c);
  }
  if (grid.empty()) throw ValidationError("sweep grid is empty");
  return grid;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::ostringstream os;
  os << "labelThreshold,externalThreshold,confidenceThreshold,labelWeight,externalWeight,"
        "internalWeight,measure,oneToOne,flatNeutral,found,correct,incorrect,missed,"
        "precision,recall,fMeasure\n";
  for (const auto& r : rows) {
    const auto& c = r.config;
    const auto& e = r.report;
    os << fmt_double(c.label_threshold) << ',' << fmt_double(c.external_threshold) << ','
       << fmt_double(c.confidence_threshold) << ',' << fmt_double(c.label_weight) << ','
       << fmt_double(c.external_weight) << ',' << fmt_double(c.internal_weight) << ','
       << to_string(c.measure) << ',' << (c.one_to_one ? "true" : "false") << ','
       << (c.flat_neutral ? "true" : "false") << ',' << e.found << ',' << e.correct << ','
       << e.incorrect << ',' << e.missed << ',' << fmt_double(e.precision) << ','
       << fmt_double(e.recall) << ',' << fmt_double(e.f_measure) << '\n';
  }
  return os.str();
}

}  // namespace semmatch
