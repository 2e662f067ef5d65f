#include "report.hh"

#include "gradedmt/parser.hh"

namespace gradedmt::cli {

Json formula_or_null(const std::optional<Formula>& f) {
  return f ? Json(render_formula(*f)) : Json(nullptr);
}

Json labels_of(const Structure& s, const std::vector<int>& elems) {
  Json out = Json::array();
  for (int e : elems) out.push_back(s.label(e));
  return out;
}

Json map_json(const StructureMap& m, const Structure& s, const Structure& t) {
  Json f = Json::object(), g = Json::object();
  for (std::size_t i = 0; i < m.f.map.size(); ++i)
    f[m.f.source->label(static_cast<Elem>(i))] = m.f.target->label(m.f.map[i]);
  for (std::size_t i = 0; i < m.g.size(); ++i) g[s.label(static_cast<int>(i))] = t.label(m.g[i]);
  return Json{{"claim", map_kind_name(m.claim)}, {"f", f}, {"g", g}};
}

std::string map_text(const StructureMap& m, const Structure& s, const Structure& t) {
  std::string out = "f:";
  for (std::size_t i = 0; i < m.f.map.size(); ++i)
    out += " " + m.f.source->label(static_cast<Elem>(i)) + "->" + m.f.target->label(m.f.map[i]);
  out += "\ng:";
  for (std::size_t i = 0; i < m.g.size(); ++i)
    out += " " + s.label(static_cast<int>(i)) + "->" + t.label(m.g[i]);
  return out;
}

Json implies_json(const ImpliesReport& r, const Structure& left) {
  Json j{{"holds", r.holds},
         {"n", r.n},
         {"bounds", {{"depth", r.bounds.depth},
                     {"variables", r.bounds.variables},
                     {"truth_constants", r.bounds.truth_constants}}},
         {"separating", formula_or_null(r.separating)}};
  if (r.separating) {
    j["left_value"] = left.chain().label(r.left_value);
    j["right_value"] = left.chain().label(r.right_value);
  }
  return j;
}

Json preservation_json(const PreservationReport& r) {
  Json bounds = Json::object();
  for (const auto& [k, v] : r.bounds) bounds[k] = v;
  Json violations = Json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"instance", v.instance},
                          {"formula", v.formula},
                          {"holds_in", v.whole},
                          {"fails_in", v.part},
                          {"value", v.part_value}});
  return Json{{"claim", r.claim},
              {"seed", r.seed},
              {"instances", r.instances},
              {"bounds", bounds},
              {"sentences_checked", r.sentences_checked},
              {"violation_count", r.violation_count},
              {"violations", violations}};
}

Json tarski_vaught_json(const TarskiVaughtReport& r, const StructureChain& c) {
  Json j{{"quantifier_free_ok", r.quantifier_free_ok},
         {"elementary_checked", r.elementary_checked},
         {"elementary_ok", r.elementary_ok},
         {"depth", r.depth},
         {"variables", r.variables},
         {"formula", formula_or_null(r.formula)}};
  if (r.member) {
    j["member"] = *r.member;
    j["tuple"] = labels_of(c.members[*r.member], r.tuple);
  }
  return j;
}

Json counterexample_json(const CounterexampleReport& r) {
  return Json{{"m_value", r.m_value},
              {"n_value", r.n_value},
              {"threshold", r.threshold},
              {"forall_in_m", r.forall_in_m},
              {"forall_in_n", r.forall_in_n},
              {"depth", r.depth},
              {"base_equivalent", r.base_equivalent},
              {"base_separator", formula_or_null(r.base_separator)},
              {"sentence", r.sentence},
              {"sentence_in_m", r.sentence_in_m},
              {"sentence_in_n", r.sentence_in_n},
              {"substructures", r.substructures},
              {"substructures_satisfy", r.substructures_satisfy},
              {"separated", r.separated()},
              {"passed", r.passed}};
}

}  // namespace gradedmt::cli
