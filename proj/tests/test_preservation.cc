#include "doctest.h"
#include "gradedmt/corpus.hh"
#include "gradedmt/error.hh"
#include "gradedmt/generator.hh"
#include "gradedmt/parser.hh"
#include "gradedmt/preservation.hh"
#include "gradedmt/samples.hh"
#include "gradedmt/semantics.hh"

using namespace gradedmt;

namespace {

ChainPtr share(FiniteChain c) { return std::make_shared<const FiniteChain>(std::move(c)); }

Structure constant_p(const ChainPtr& g, std::vector<std::string> dom, const char* v) {
  return samples::constant_predicate(g, std::move(dom), "P", *g->find(v));
}

Signature p_only() {
  Signature s;
  s.add_predicate("P", 1);
  return s;
}

}  // namespace

TEST_CASE("worked counterexample") {
  auto r = reproduce_counterexample();
  CHECK(r.forall_in_m == "3/4");
  CHECK(r.forall_in_n == "1/2");
  CHECK(r.base_equivalent);
  CHECK_FALSE(r.base_separator.has_value());
  CHECK(r.sentence_in_m == "1");
  CHECK(r.sentence_in_n == "1/2");
  CHECK(r.substructures == 7);
  CHECK(r.substructures_satisfy);
  CHECK(r.separated());
  CHECK(r.passed);

  auto flipped = reproduce_counterexample("3/4", "3/4", "3/4");
  CHECK_FALSE(flipped.separated());
  CHECK_FALSE(flipped.passed);
  CHECK_THROWS_AS(reproduce_counterexample("2/3"), PreconditionError);
}

TEST_CASE("existential transfer between structures") {
  auto g = share(chains::godel4());
  auto m = constant_p(g, {"0", "1", "2"}, "3/4");
  auto n = constant_p(g, {"0", "1", "2"}, "1/2");
  Budget budget(Budget::kDefault);
  auto r = implies_exists_n(m, n, {}, 1, {}, budget);
  CHECK_FALSE(r.holds);
  REQUIRE(r.separating);
  CHECK(render_formula(*r.separating) == "exists x1. (P(x1) <-> val(3/4))");
  CHECK(g->label(r.left_value) == "1");
  CHECK(implies_exists_n(m, m, {"0"}, 1, {}, budget).holds);
  CHECK(implies_exists_n(n, n, {}, 2, {}, budget).holds);

  // Without truth constants no generated sentence can tell them apart.
  CHECK(implies_exists_n(m, n, {}, 1, {1, 2, false}, budget).holds);
  CHECK_THROWS_AS(implies_exists_n(m, n, {"9"}, 1, {}, budget), PreconditionError);
}

TEST_CASE("explicit preservation checks") {
  auto g = share(chains::godel4());
  auto sig = expand_with_truth_constants(p_only(), g);
  Structure mixed(g, {"a", "b"});
  mixed.set_predicate("P", {1, {*g->find("1"), *g->find("0")}});
  std::vector<Structure> corpus{mixed, constant_p(g, {"a"}, "1")};
  std::vector<Formula> universal{parse_formula("forall x. P(x)", sig),
                                 parse_formula("forall x. (P(x) -> val(1/2))", sig)};
  CHECK(check_preserved_under_substructures(universal, corpus).ok());

  std::vector<Formula> existential{parse_formula("exists x. P(x)", sig)};
  auto bad = check_preserved_under_substructures(existential, corpus);
  CHECK(bad.violation_count == 1);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].part == "{b}");
  CHECK(bad.violations[0].part_value == "0");
}

TEST_CASE("randomized preservation suites") {
  SuiteOptions o;
  o.instances = 40;
  o.jobs = 2;
  o.max_domain = 3;
  auto lemma = run_substructure_suite(o, PrenexClass::forall_n(1));
  CHECK(lemma.claim == "los-tarski-lemma");
  CHECK(lemma.instances == 40);
  CHECK(lemma.sentences_checked > 0);
  CHECK(lemma.ok());

  auto control = run_substructure_suite(o, PrenexClass::exists_n(1));
  CHECK(control.violation_count > 0);

  auto unions = run_union_suite(o, PrenexClass::forall_n(2));
  CHECK(unions.claim == "union-lemma");
  CHECK(unions.ok());

  o.jobs = 1;
  auto again = run_substructure_suite(o, PrenexClass::exists_n(1));
  CHECK(again.violation_count == control.violation_count);
  CHECK(again.sentences_checked == control.sentences_checked);
}

TEST_CASE("bounded amalgamation") {
  auto g = share(chains::godel4());
  Budget budget(Budget::kDefault);

  auto one = constant_p(g, {"a"}, "3/4");
  AmalgamInstance trivial{"trivial", one, one, one, {"a"}};
  auto r = search_amalgam(trivial, {}, budget);
  REQUIRE(r.status == AmalgamStatus::Found);
  CHECK(r.amalgam->size() == 1);
  CHECK(verify_amalgam(trivial, r, {}, budget).ok());

  AmalgamInstance grow{"grow", one, constant_p(g, {"a", "c", "d"}, "3/4"),
                       constant_p(g, {"a", "b"}, "3/4"), {"a"}};
  AmalgamOptions opt;
  opt.variables = 2;
  r = search_amalgam(grow, opt, budget);
  REQUIRE(r.status == AmalgamStatus::Found);
  CHECK(r.amalgam->size() == 3);
  CHECK(r.left_map->g[0] == 0);
  auto v = verify_amalgam(grow, r, opt, budget);
  CHECK(v.ok());

  opt.n = 2;
  r = search_amalgam(grow, opt, budget);
  REQUIRE(r.status == AmalgamStatus::Found);
  CHECK(verify_amalgam(grow, r, opt, budget).ok());

  AmalgamInstance split{"split", one, constant_p(g, {"a"}, "3/4"),
                        constant_p(g, {"a", "b"}, "1/2"), {"a"}};
  CHECK_THROWS_AS(validate_amalgam_instance(split), PreconditionError);

  AmalgamInstance failing{"failing", std::nullopt, constant_p(g, {"a"}, "3/4"),
                          constant_p(g, {"b"}, "1/2"), {}};
  r = search_amalgam(failing, {}, budget);
  CHECK(r.status == AmalgamStatus::PreconditionFailed);
  CHECK(r.precondition.separating.has_value());

  // A one-element right part has no two-element extension elementary to
  // depth 1, so the disjoint search stays within bounds empty-handed.
  AmalgamInstance twins{"twins", std::nullopt, constant_p(g, {"c"}, "3/4"),
                        constant_p(g, {"a"}, "3/4"), {}};
  AmalgamOptions disjoint;
  disjoint.depth = 1;
  disjoint.variables = 2;
  disjoint.max_size = 2;
  disjoint.disjoint = true;
  CHECK(search_amalgam(twins, disjoint, budget).status == AmalgamStatus::NoneWithinBounds);
  disjoint.depth = 0;
  r = search_amalgam(twins, disjoint, budget);
  REQUIRE(r.status == AmalgamStatus::Found);
  CHECK(r.amalgam->size() == 2);
  CHECK(r.left_map->g[0] == 1);
  disjoint.disjoint = false;
  r = search_amalgam(twins, disjoint, budget);
  REQUIRE(r.status == AmalgamStatus::Found);
  CHECK(r.amalgam->size() == 1);

  Budget tiny(3);
  auto out = search_amalgam(grow, {}, tiny);
  CHECK(out.status == AmalgamStatus::NoneWithinBounds);
  CHECK(out.budget_exhausted);
}

TEST_CASE("bounded universal consequences") {
  auto b = share(chains::boolean());
  Signature sig;
  sig.add_predicate("R", 2);
  auto theory = parse_theory("forall x. forall y. (R(x, y) -> R(y, x))\n", sig);
  Budget budget(Budget::kDefault);
  auto c = universal_consequences_bounded(theory, sig, b, {1, 2, 2}, budget);
  REQUIRE_FALSE(c.sentences.empty());
  CHECK(c.sentences[0] == theory[0]);
  CHECK(c.models == 2 + 8);
  CHECK(c.candidates >= c.sentences.size() - 1);
  bool reversed = false;
  for (const auto& f : c.sentences) {
    reversed |= render_formula(f) == "forall x1 x2. (R(x2,x1) -> R(x1,x2))";
    CHECK(fits_within(classify_prenex(f), PrenexClass::forall_n(1)));
    for_each_structure(sig, b, 2, budget, [&](const Structure& s) {
      if (is_model(theory, s).ok) CHECK(satisfies(f, s, Assignment{}));
      return true;
    });
  }
  CHECK(reversed);
}

TEST_CASE("union preservation on explicit chains") {
  auto g = share(chains::godel4());
  Signature sig;
  sig.add_predicate("R", 2);
  sig = expand_with_truth_constants(sig, g);
  std::vector<Structure> ks;
  for (int k = 3; k <= 5; ++k) ks.push_back(samples::complete_graph(g, samples::numbered("v", k)));
  std::vector<StructureChain> chains{validate_chain_of_structures(ks)};
  std::vector<Formula> degree2{
      parse_formula("forall x. exists y z. (not (y ~ z) /\\ R(x,y) /\\ R(x,z))", sig)};
  auto r = check_preserved_under_unions(degree2, chains);
  CHECK(r.ok());
  CHECK(r.sentences_checked == 1);
  CHECK(satisfies(degree2[0], union_of_chain(chains[0]), Assignment{}));

  // The premise fails in every member, so nothing is reported.
  std::vector<Formula> total{parse_formula("forall x y. R(x,y)", sig)};
  CHECK(check_preserved_under_unions(total, chains).ok());
}

TEST_CASE("existential transfer properties on random pairs") {
  Budget budget(Budget::kDefault);
  int transfers = 0;
  for (std::uint64_t i = 0; i < 60; ++i) {
    Rng rng = instance_rng(11, i);
    ChainPtr chain = random_mtl_chain(2 + static_cast<int>(rng() % 2), rng);
    auto small = random_structure(suite_signature(), chain, samples::numbered("e", 1 + rng() % 2), rng);
    auto big = random_extension(small, {"f0"}, rng);
    CHECK(implies_exists_n(small, big, {"e0"}, 1, {}, budget).holds);

    auto other = random_structure(suite_signature(), chain, samples::numbered("e", 1 + rng() % 2), rng);
    if (!implies_exists_n(small, other, {"e0"}, 1, {}, budget).holds) continue;
    ++transfers;
    GeneratorOptions opt;
    opt.depth = 2;
    opt.variables = 0;
    opt.param_names = {"c_e0"};
    World l{&small, {0}}, r{&other, {0}};
    FormulaEnumerator gen({l, r}, generation_signature(small, true), opt, budget);
    gen.run([&](const FormulaClass& c) {
      CHECK(c.values[0] == c.values[1]);
      return true;
    });
  }
  CHECK(transfers > 0);
}

TEST_CASE("value-agreeing universal sentences") {
  auto g = share(chains::godel4());
  auto sig = expand_with_truth_constants(p_only(), g);
  std::vector<Structure> corpus{constant_p(g, {"0", "1"}, "3/4"), constant_p(g, {"0"}, "1/2")};
  Budget budget(Budget::kDefault);
  auto threshold = parse_formula("val(3/4) -> forall x. P(x)", sig);
  auto r = find_value_agreeing_universal(threshold, corpus, {1, 1, true}, budget);
  REQUIRE(r.universal);
  for (const auto& s : corpus) CHECK(eval_formula(*r.universal, s) == eval_formula(threshold, s));
  CHECK(fits_within(classify_prenex(*r.universal), PrenexClass::forall_n(1)));

  // A substructure lowers exists x. P(x) here, which no universal sentence does.
  Structure mixed(g, {"a", "b"});
  mixed.set_predicate("P", {1, {*g->find("1"), *g->find("0")}});
  std::vector<Structure> split{mixed, constant_p(g, {"b"}, "0")};
  auto some = parse_formula("exists x. P(x)", sig);
  auto e = find_value_agreeing_universal(some, split, {1, 1, true}, budget);
  CHECK_FALSE(e.universal);
  CHECK(e.candidates > 0);
}
