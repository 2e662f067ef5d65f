#include <random>
#include <unordered_set>

#include "doctest.h"
#include "gradedmt/diagrams.hh"
#include "gradedmt/error.hh"
#include "gradedmt/parser.hh"
#include "gradedmt/samples.hh"
#include "gradedmt/semantics.hh"

using namespace gradedmt;

namespace {

ChainPtr share(FiniteChain c) { return std::make_shared<const FiniteChain>(std::move(c)); }

Structure weighted(ChainPtr chain, std::vector<std::string> dom, std::vector<Elem> r) {
  Structure s(std::move(chain), std::move(dom));
  s.set_predicate("R", {2, std::move(r)});
  return s;
}

const DiagramEntry* entry_for(const Diagram& d, const Formula& f) {
  for (const auto& e : d.entries)
    if (alpha_equivalent(e.sentence, f)) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("expansion by domain constants") {
  auto g = share(chains::godel4());
  Structure m(g, {"a", "b"});
  m.set_predicate("P", {1, {1, 2}});
  Structure sharp = expansion_sharp(m);
  CHECK(sharp.functions().size() == 2);
  CHECK(eval_term(Term::apply("c_a"), sharp) == 0);
  CHECK(eval_term(Term::apply("c_b"), sharp) == 1);
  CHECK(eval_formula(Formula::atom("P", {Term::apply("c_b")}), sharp) == 2);
  CHECK_THROWS_AS(expansion_sharp(sharp), SignatureError);
}

TEST_CASE("diagram contents") {
  auto g = share(chains::godel4());
  Budget b;
  Structure m = samples::constant_predicate(g, {"m"}, "P", 2);
  Signature sig = expand_with_domain_constants(m.signature(), m.domain());
  Diagram diag = build_diagram(m, DiagramKind::Diag, {}, b);
  auto* pc = entry_for(diag, parse_formula("P(c_m)", sig));
  REQUIRE(pc);
  CHECK(g->label(pc->value) == "3/4");
  CHECK(diag.entries.size() == 2);  // P(c_m), c_m ~ c_m

  Diagram el = build_diagram(m, DiagramKind::ElDiag, {1, 0}, b);
  auto* all = entry_for(el, parse_formula("forall x. P(x)", sig));
  REQUIRE(all);
  CHECK(g->label(all->value) == "3/4");

  for (const auto& e : el.entries) CHECK(e.value == eval_formula(e.sentence, expansion_sharp(m)));
  CHECK(render_diagram(diag).find("P(c_m) <-> val(3/4)") != std::string::npos);
}

TEST_CASE("crisp structures have crisp diagrams") {
  auto g = share(chains::godel4());
  Budget b;
  Diagram d = build_diagram(samples::complete_graph(g, {"a", "b", "c"}), DiagramKind::Diag, {1, 0}, b);
  CHECK(d.entries.size() > 100);
  for (const auto& e : d.entries) CHECK((e.value == 0 || e.value == g->top()));
}

TEST_CASE("entries re-evaluate and Diag lies inside ElDiag") {
  auto g = share(chains::lukasiewicz(2));
  std::mt19937 rng(79);
  Budget b;
  for (int trial = 0; trial < 10; ++trial) {
    Structure s = weighted(g, {"a", "b"}, {static_cast<Elem>(rng() % 3), static_cast<Elem>(rng() % 3),
                                           static_cast<Elem>(rng() % 3), static_cast<Elem>(rng() % 3)});
    Structure sharp = expansion_sharp(s);
    for (int depth = 0; depth <= 1; ++depth) {
      Diagram diag = build_diagram(s, DiagramKind::Diag, {depth, 0}, b);
      Diagram el = build_diagram(s, DiagramKind::ElDiag, {depth, 0}, b);
      std::unordered_set<Formula, FormulaHash> el_set;
      for (const auto& e : el.entries) {
        CHECK(e.value == eval_formula(e.sentence, sharp));
        el_set.insert(e.sentence);
      }
      for (const auto& e : diag.entries) {
        CHECK(e.value == eval_formula(e.sentence, sharp));
        CHECK(is_quantifier_free(e.sentence));
        CHECK(el_set.contains(e.sentence));
      }
    }
  }
}

TEST_CASE("models_diagram") {
  auto g = share(chains::godel4());
  Budget b;
  Structure m = samples::constant_predicate(g, {"m"}, "P", 2);
  Diagram d = build_diagram(m, DiagramKind::Diag, {}, b);
  CHECK(models_diagram(expansion_sharp(m), d).ok);

  Structure n = samples::constant_predicate(g, {"n"}, "P", 1);
  auto r = models_diagram(n.with_constants({{"c_m", 0}}), d);
  CHECK_FALSE(r.ok);
  CHECK(g->label(r.found) == "1/2");
  CHECK_THROWS_AS(models_diagram(n, d), PreconditionError);

  Structure k4 = samples::complete_graph(g, {"a", "b", "c", "d"});
  Structure k2 = samples::complete_graph(g, {"b", "d"});
  Diagram dk = build_diagram(k2, DiagramKind::Diag, {}, b);
  CHECK(models_diagram(k4.with_constants({{"c_b", 1}, {"c_d", 3}}), dk).ok);
  CHECK_FALSE(models_diagram(k4.with_constants({{"c_b", 1}, {"c_d", 1}}), dk).ok);
}

TEST_CASE("diagram and embedding sides") {
  auto g = share(chains::godel4());
  Budget b;
  Structure t = weighted(g, {"a", "b", "c"}, {0, 3, 2, 3, 0, 1, 2, 1, 0});
  std::vector<std::string> ac{"a", "c"};
  Structure s = weighted(g, ac, {0, 2, 2, 0});
  auto both = diagram_embedding_equivalence(s, t, DiagramKind::Diag, {}, b);
  CHECK(both.diagram_side);
  CHECK(both.embedding_side);
  CHECK(both.interpretation == std::vector<int>{0, 2});

  Structure m = samples::constant_predicate(g, {"m"}, "P", 2);
  Structure n = samples::constant_predicate(g, {"n"}, "P", 1);
  auto none = diagram_embedding_equivalence(m, n, DiagramKind::Diag, {}, b);
  CHECK_FALSE(none.diagram_side);
  CHECK_FALSE(none.embedding_side);
}

TEST_CASE("both sides agree on every small instance") {
  auto g = share(chains::boolean());
  Budget b;
  Signature sig;
  sig.add_predicate("R", 2);
  std::vector<Structure> small, large;
  for (int n = 1; n <= 2; ++n)
    for_each_structure(sig, g, n, b, [&](const Structure& s) {
      small.push_back(s);
      return true;
    });
  for (int n = 1; n <= 3; ++n)
    for_each_structure(sig, g, n, b, [&](const Structure& s) {
      large.push_back(s);
      return true;
    });
  int positive = 0, el_checked = 0;
  for (const auto& s : small) {
    Diagram d = build_diagram(s, DiagramKind::Diag, {}, b);
    for (const auto& t : large) {
      auto r = diagram_embedding_equivalence(s, d, t, b);
      CHECK(r.agree());
      positive += r.diagram_side;
      if (t.size() <= 2) {
        auto el = diagram_embedding_equivalence(s, t, DiagramKind::ElDiag, {1, 0}, b);
        CHECK(el.agree());
        CHECK((!el.diagram_side || r.diagram_side));
        ++el_checked;
      }
    }
  }
  CHECK(positive > 0);
  CHECK(el_checked > 0);
}
