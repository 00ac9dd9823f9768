// semmatch: command-line front end for matching, phase-two agreement,
// evaluation and the super-peer simulator.
//
// Exit codes: 0 ok, 1 usage, 2 parse, 3 validation, 4 runtime (I/O,
// protocol).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "semmatch/agreement.hpp"
#include "semmatch/evaluation.hpp"
#include "semmatch/matcher.hpp"
#include "semmatch/p2psim.hpp"
#include "semmatch/schema.hpp"
#include "semmatch/taxonomy.hpp"

namespace {

using namespace semmatch;
namespace fs = std::filesystem;
using nlohmann::json;

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kValidation = 3, kRuntime = 4 };

struct CliConfig {
  std::vector<std::string> taxonomy_paths;
  MatchConfig match;
  std::string measure = "wup";
  std::string format = "json";
  std::uint64_t seed = 0;
};

void add_match_flags(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--taxonomy", cfg.taxonomy_paths,
                  "Taxonomy file (repeatable; files are concatenated). "
                  "Falls back to $SEMMATCH_TAXONOMY, then the bundled taxonomy");
  cmd->add_option("--label-threshold", cfg.match.label_threshold)->capture_default_str();
  cmd->add_option("--external-threshold", cfg.match.external_threshold)->capture_default_str();
  cmd->add_option("--confidence-threshold", cfg.match.confidence_threshold)
      ->capture_default_str();
  cmd->add_option("--label-weight", cfg.match.label_weight)->capture_default_str();
  cmd->add_option("--external-weight", cfg.match.external_weight)->capture_default_str();
  cmd->add_option("--internal-weight", cfg.match.internal_weight)->capture_default_str();
  cmd->add_option("--measure", cfg.measure)
      ->check(CLI::IsMember({"wup", "path"}))
      ->capture_default_str();
  cmd->add_option("--one-to-one", cfg.match.one_to_one, "true|false")->capture_default_str();
  cmd->add_flag("--flat-neutral", cfg.match.flat_neutral,
                "Give the external weight to the label score when a superclass set is empty");
  cmd->add_flag("--edit-distance-fallback", cfg.match.edit_distance_fallback,
                "Score out-of-vocabulary pairs by normalized edit distance");
}

void add_format_flag(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--format", cfg.format)
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Taxonomy load_taxonomy(const CliConfig& cfg) {
  std::vector<std::string> paths = cfg.taxonomy_paths;
  if (paths.empty()) {
    if (const char* env = std::getenv("SEMMATCH_TAXONOMY"); env && *env) paths.emplace_back(env);
  }
  if (paths.empty()) return bundled_taxonomy();
  std::string text;
  for (const auto& p : paths) {
    text += read_file(p);
    text += '\n';
  }
  return Taxonomy::parse(text);
}

MatchConfig effective(CliConfig& cfg) {
  cfg.match.measure = parse_measure(cfg.measure);
  cfg.match.validate();
  return cfg.match;
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

void print_units(const HalfAgreement& h) {
  const auto& c = h.config;
  std::printf("# peer %s  schema %s  ontology %s\n", h.peer_id.c_str(), h.schema_id.c_str(),
              h.common_ontology_id.c_str());
  std::printf(
      "# labelThreshold=%g externalThreshold=%g confidenceThreshold=%g labelWeight=%g "
      "externalWeight=%g internalWeight=%g measure=%s oneToOne=%s flatNeutral=%s\n",
      c.label_threshold, c.external_threshold, c.confidence_threshold, c.label_weight,
      c.external_weight, c.internal_weight, std::string(to_string(c.measure)).c_str(),
      c.one_to_one ? "true" : "false", c.flat_neutral ? "true" : "false");
  std::printf("%-28s %-28s %-8s %-8s %-8s %-10s %s\n", "source", "target", "label", "external",
              "internal", "confidence", "verdict");
  for (const auto& u : h.units)
    std::printf("%-28s %-28s %-8.4f %-8.4f %-8.4f %-10.4f %s\n", u.source_ref.c_str(),
                u.target_ref.c_str(), u.label_score, u.external_score, u.internal_score,
                u.confidence, std::string(to_string(u.verdict)).c_str());
}

int cmd_match(CliConfig& cfg, const std::string& export_path, const std::string& co_path) {
  auto cfg_used = effective(cfg);
  auto tax = load_taxonomy(cfg);
  auto exported = Schema::load_file(export_path);
  auto common = Schema::load_file(co_path);
  auto h = build_half_agreement(tax, exported, common, cfg_used);
  if (cfg.format == "table")
    print_units(h);
  else
    std::cout << h.serialize();
  return kOk;
}

int cmd_compare(const CliConfig& cfg, const PhaseTwoConfig& p2, const std::string& a,
                const std::string& b) {
  auto req = HalfAgreement::load_file(a);
  auto prov = HalfAgreement::load_file(b);
  auto r = compare_half_agreements(req, prov, p2);
  if (cfg.format == "table") {
    std::printf("requester  provider  overlap   verdict     shared\n");
    std::string shared;
    for (const auto& t : r.shared_targets) shared += (shared.empty() ? "" : ",") + t;
    std::printf("%-10s %-9s %-9.6f %-11s %s\n", r.requester_id.c_str(), r.provider_id.c_str(),
                r.overlap_score, std::string(to_string(r.verdict)).c_str(), shared.c_str());
  } else {
    std::cout << r.to_json().dump(2) << "\n";
  }
  return kOk;
}

int cmd_bind(const CliConfig& cfg, const std::string& a, const std::string& b) {
  auto req = HalfAgreement::load_file(a);
  auto prov = HalfAgreement::load_file(b);
  auto f = compose(req, prov);
  if (cfg.format == "table") {
    std::printf("%-28s %-28s %-10s %s\n", "source", "target", "confidence", "via");
    for (const auto& l : f.links)
      std::printf("%-28s %-28s %-10.4f %s\n", l.source_ref.c_str(), l.target_ref.c_str(),
                  l.confidence, l.via.c_str());
  } else {
    std::cout << f.serialize();
  }
  return kOk;
}

int cmd_eval(const CliConfig& cfg, const std::string& produced_path, const std::string& gold_path,
             const std::string& source_schema, const std::string& target_schema) {
  auto doc = read_json(produced_path);
  auto gold = GoldMapping::load_file(gold_path);
  if (!source_schema.empty() && !target_schema.empty())
    check_gold(gold, Schema::load_file(source_schema), Schema::load_file(target_schema));
  EvalReport r;
  if (doc.contains("links"))
    r = evaluate(FullAgreement::from_json(doc), gold);
  else
    r = evaluate(HalfAgreement::from_json(doc), gold);
  if (cfg.format == "table")
    std::cout << r.to_table();
  else
    std::cout << r.to_json().dump(2) << "\n";
  return kOk;
}

int cmd_sweep(CliConfig& cfg, const std::string& fixture_dir, const std::string& grid_path) {
  auto base = effective(cfg);
  auto tax = load_taxonomy(cfg);
  fs::path dir(fixture_dir);
  auto exported = Schema::load_file((dir / "export.json").string());
  auto common = Schema::load_file((dir / "co.json").string());
  auto gold = GoldMapping::load_file((dir / "gold.tsv").string());
  auto grid = grid_path.empty() ? default_sweep_grid(base)
                                : parse_sweep_grid(read_file(grid_path), base);
  auto rows = threshold_sweep(tax, exported, common, gold, grid);
  std::cout << sweep_csv(rows);
  return kOk;
}

int cmd_simulate(CliConfig& cfg, sim::SimConfig sc, const std::string& scenario) {
  auto match = effective(cfg);
  auto tax = load_taxonomy(cfg);
  sc.seed = cfg.seed;
  auto result = sim::run_scenario_file(scenario, tax, sc, match);
  std::cout << result.trace_jsonl();
  if (result.error) {
    std::cerr << "semmatch: " << scenario << ": line " << result.error->line << ": "
              << result.error->message << "\n";
    return kRuntime;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic matchmaking over half agreements and super-peer discovery"};
  app.require_subcommand(1);
  CliConfig cfg;

  std::string a, b;
  auto* match = app.add_subcommand("match", "Build a half agreement (phase-one matchmaking)");
  match->add_option("export", a, "Export schema (JSON)")->required();
  match->add_option("co", b, "Common ontology (JSON)")->required();
  add_match_flags(match, cfg);
  add_format_flag(match, cfg);

  PhaseTwoConfig p2;
  auto* compare = app.add_subcommand("compare", "Phase-two comparison of two half agreements");
  compare->add_option("requester", a)->required();
  compare->add_option("provider", b)->required();
  compare->add_option("--exact-floor", p2.exact_floor)->capture_default_str();
  compare->add_option("--similar-floor", p2.similar_floor)->capture_default_str();
  add_format_flag(compare, cfg);

  auto* bind = app.add_subcommand("bind", "Compose two half agreements into a full agreement");
  bind->add_option("requester", a)->required();
  bind->add_option("provider", b)->required();
  add_format_flag(bind, cfg);

  std::string source_schema, target_schema;
  auto* eval = app.add_subcommand("eval", "Precision/recall/F of a mapping against gold");
  eval->add_option("produced", a, "Half or full agreement (JSON)")->required();
  eval->add_option("gold", b, "Gold mapping (TSV)")->required();
  eval->add_option("--source-schema", source_schema, "Validate gold refs against this schema");
  eval->add_option("--target-schema", target_schema, "Validate gold refs against this schema");
  add_format_flag(eval, cfg);

  auto* sweep = app.add_subcommand("sweep", "Threshold sweep over a fixture directory (CSV)");
  sweep->add_option("fixture-dir", a, "Directory holding export.json, co.json, gold.tsv")
      ->required();
  sweep->add_option("grid", b, "JSON array of partial match configs");
  add_match_flags(sweep, cfg);

  sim::SimConfig sc;
  auto* simulate = app.add_subcommand("simulate", "Run a super-peer scenario, emit JSONL trace");
  simulate->add_option("scenario", a)->required();
  simulate->add_option("--seed", cfg.seed)->capture_default_str();
  simulate->add_option("--latency", sc.latency_ticks)->capture_default_str();
  simulate->add_option("--drop-probability", sc.drop_probability)->capture_default_str();
  simulate->add_option("--max-ticks", sc.max_ticks)->capture_default_str();
  add_match_flags(simulate, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*match) return cmd_match(cfg, a, b);
    if (*compare) return cmd_compare(cfg, p2, a, b);
    if (*bind) return cmd_bind(cfg, a, b);
    if (*eval) return cmd_eval(cfg, a, b, source_schema, target_schema);
    if (*sweep) return cmd_sweep(cfg, a, b);
    if (*simulate) return cmd_simulate(cfg, sc, a);
  } catch (const ParseError& e) {
    std::cerr << "semmatch: parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "semmatch: invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "semmatch: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
