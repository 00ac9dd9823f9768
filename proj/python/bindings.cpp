// Python bindings. Structured values cross the boundary as canonical JSON
// text; the semmatch package turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "semmatch/agreement.hpp"
#include "semmatch/evaluation.hpp"
#include "semmatch/matcher.hpp"
#include "semmatch/p2psim.hpp"
#include "semmatch/schema.hpp"
#include "semmatch/taxonomy.hpp"

namespace py = pybind11;
using namespace semmatch;
using nlohmann::json;

namespace {

MatchConfig config_from(const std::string& text) {
  if (text.empty()) return {};
  MatchConfig c;
  try {
    c = MatchConfig::from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("match config: ") + e.what());
  }
  c.validate();
  return c;
}

GoldMapping gold_from(const std::string& tsv) {
  std::istringstream in(tsv);
  return GoldMapping::load(in, "gold");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "semmatch core: taxonomy similarity, schema matching, agreements, simulator";

  auto base = py::register_exception<Error>(m, "SemmatchError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<ProtocolError>(m, "ProtocolError", base.ptr());

  py::class_<Taxonomy>(m, "Taxonomy")
      .def_static("bundled", [] { return bundled_taxonomy(); })
      .def_static("parse", [](const std::string& text) { return Taxonomy::parse(text); })
      .def_static("load_file", &Taxonomy::load_file)
      .def("__len__", &Taxonomy::size)
      .def_property_readonly("max_depth", &Taxonomy::max_depth)
      .def("__contains__", [](const Taxonomy& t, const std::string& id) { return t.contains(id); })
      .def("depth", [](const Taxonomy& t, const std::string& id) { return t.depth(id); })
      .def("synset_ids", &Taxonomy::synset_ids)
      .def("lemmas", &Taxonomy::lemmas)
      .def("senses_of", [](const Taxonomy& t, const std::string& w) { return t.senses_of(w); })
      .def("lowest_common_subsumer",
           [](const Taxonomy& t, const std::string& a, const std::string& b) {
             return t.lowest_common_subsumer(a, b);
           })
      .def("wup", [](const Taxonomy& t, const std::string& a,
                     const std::string& b) { return t.wup(a, b).value; })
      .def("path", [](const Taxonomy& t, const std::string& a,
                      const std::string& b) { return t.path(a, b).value; })
      .def(
          "lemma_similarity",
          [](const Taxonomy& t, const std::string& a, const std::string& b,
             const std::string& measure, bool edit_fallback) {
            return t.lemma_similarity(a, b, {parse_measure(measure), edit_fallback});
          },
          py::arg("w1"), py::arg("w2"), py::arg("measure") = "wup",
          py::arg("edit_distance_fallback") = false);

  m.def("bundled_taxonomy_text", [] { return std::string(bundled_taxonomy_text()); });
  m.def("tokenize_label", &tokenize_label);
  m.def(
      "label_similarity",
      [](const Taxonomy& t, const std::string& a, const std::string& b,
         const std::string& measure) {
        return label_similarity(t, a, b, {parse_measure(measure), false});
      },
      py::arg("taxonomy"), py::arg("l1"), py::arg("l2"), py::arg("measure") = "wup");

  m.def("default_config", [] { return MatchConfig{}.to_json().dump(); });

  m.def(
      "build_half_agreement",
      [](const Taxonomy& t, const std::string& exported, const std::string& common,
         const std::string& config, const std::string& peer_id) {
        return build_half_agreement(t, Schema::parse(exported), Schema::parse(common),
                                    config_from(config), peer_id)
            .serialize();
      },
      py::arg("taxonomy"), py::arg("export_json"), py::arg("co_json"),
      py::arg("config_json") = "", py::arg("peer_id") = "");

  m.def(
      "score_candidates",
      [](const Taxonomy& t, const std::string& exported, const std::string& common,
         const std::string& config) {
        json out = json::array();
        for (const auto& u : score_candidates(t, Schema::parse(exported), Schema::parse(common),
                                              config_from(config)))
          out.push_back(u.to_json());
        return out.dump();
      },
      py::arg("taxonomy"), py::arg("export_json"), py::arg("co_json"),
      py::arg("config_json") = "");

  m.def(
      "compare_half_agreements",
      [](const std::string& req, const std::string& prov, double exact_floor,
         double similar_floor) {
        return compare_half_agreements(HalfAgreement::parse(req), HalfAgreement::parse(prov),
                                       {exact_floor, similar_floor})
            .to_json()
            .dump();
      },
      py::arg("requester_json"), py::arg("provider_json"), py::arg("exact_floor") = 0.9,
      py::arg("similar_floor") = 0.5);

  m.def("compose", [](const std::string& req, const std::string& prov) {
    return compose(HalfAgreement::parse(req), HalfAgreement::parse(prov)).serialize();
  });

  m.def("evaluate", [](const std::string& produced, const std::string& gold_tsv) {
    json doc;
    try {
      doc = json::parse(produced);
    } catch (const json::parse_error& e) {
      throw ParseError(0, std::string("produced mapping: ") + e.what());
    }
    auto gold = gold_from(gold_tsv);
    auto r = doc.contains("links") ? evaluate(FullAgreement::from_json(doc), gold)
                                   : evaluate(HalfAgreement::from_json(doc), gold);
    return r.to_json().dump();
  });

  m.def(
      "sweep",
      [](const Taxonomy& t, const std::string& exported, const std::string& common,
         const std::string& gold_tsv, const std::string& grid_json) {
        auto grid = grid_json.empty() ? default_sweep_grid() : parse_sweep_grid(grid_json);
        auto rows = threshold_sweep(t, Schema::parse(exported), Schema::parse(common),
                                    gold_from(gold_tsv), grid);
        return sweep_csv(rows);
      },
      py::arg("taxonomy"), py::arg("export_json"), py::arg("co_json"), py::arg("gold_tsv"),
      py::arg("grid_json") = "");

  m.def(
      "run_scenario",
      [](const std::string& script, const std::string& base_dir, const Taxonomy& t,
         std::uint64_t seed, std::int64_t latency, double drop, std::int64_t max_ticks,
         const std::string& config) -> py::tuple {
        sim::SimConfig sc{seed, latency, drop, max_ticks};
        sc.validate();
        auto r = sim::run_scenario(script, base_dir, t, sc, config_from(config));
        if (r.error) return py::make_tuple(r.trace_jsonl(), r.error->line, r.error->message);
        return py::make_tuple(r.trace_jsonl(), py::none(), py::none());
      },
      py::arg("script"), py::arg("base_dir"), py::arg("taxonomy"), py::arg("seed") = 0,
      py::arg("latency_ticks") = 1, py::arg("drop_probability") = 0.0,
      py::arg("max_ticks") = 1'000'000, py::arg("config_json") = "");
}
