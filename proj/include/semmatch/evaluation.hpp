#pragma once

#include <istream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "semmatch/agreement.hpp"
#include "semmatch/matcher.hpp"

namespace semmatch {

using RefPair = std::pair<std::string, std::string>;

struct GoldMapping {
  std::string schema_pair_id;
  std::set<RefPair> pairs;

  // TSV with a "sourceRef<TAB>targetRef" header; '#' lines and blank lines
  // are skipped. Throws ParseError (with line) or ValidationError if empty.
  static GoldMapping load(std::istream& in, std::string schema_pair_id);
  static GoldMapping load_file(const std::string& path);
};

// Throws ValidationError naming the first gold ref that does not resolve.
void check_gold(const GoldMapping& gold, const Schema& source, const Schema& target);

struct EvalReport {
  std::size_t found = 0;
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  std::size_t missed = 0;
  double precision = 1.0;
  double recall = 0.0;
  double f_measure = 0.0;

  nlohmann::json to_json() const;
  std::string to_table() const;
  bool operator==(const EvalReport&) const = default;
};

// Set comparison on (sourceRef, targetRef). Precision is 1 when nothing
// was found; F is 0 when P + R = 0.
EvalReport evaluate(const std::set<RefPair>& produced, const GoldMapping& gold);
EvalReport evaluate(const HalfAgreement& produced, const GoldMapping& gold);
EvalReport evaluate(const FullAgreement& produced, const GoldMapping& gold);

struct SweepRow {
  MatchConfig config;
  EvalReport report;
};

std::vector<SweepRow> threshold_sweep(const Taxonomy& tax, const Schema& exported,
                                      const Schema& common, const GoldMapping& gold,
                                      std::span<const MatchConfig> grid);

// Confidence thresholds {0, 0.25, 0.5, 0.75, 1} over `base`.
std::vector<MatchConfig> default_sweep_grid(const MatchConfig& base = {});

// Grid file: JSON array of partial MatchConfig objects applied over `base`.
std::vector<MatchConfig> parse_sweep_grid(std::string_view text, const MatchConfig& base = {});

std::string sweep_csv(std::span<const SweepRow> rows);

}  // namespace semmatch
