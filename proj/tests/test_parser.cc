#include <random>

#include "doctest.h"
#include "gradedmt/error.hh"
#include "gradedmt/parser.hh"
#include "random_formula.hh"

using namespace gradedmt;

namespace {

Signature graph_sig() {
  Signature s;
  s.add_predicate("R", 2);
  return s;
}

}  // namespace

TEST_CASE("weighted-graph irreflexivity axiom") {
  Formula f = parse_formula("forall x. (R(x,x) -> val(0))", graph_sig());
  Formula expected = Formula::forall(
      "x", Formula::binary(Connective::Implies,
                           Formula::atom("R", {Term::var("x"), Term::var("x")}),
                           Formula::bottom()));
  CHECK(f == expected);
  CHECK(render_formula(f) == "forall x. (R(x,x) -> val(0))");
  CHECK(parse_formula(render_formula(f), graph_sig()) == f);
}

TEST_CASE("truth constants") {
  CHECK(parse_formula("val(1)", graph_sig()) == Formula::top());
  CHECK(render_formula(parse_formula("val(1)", graph_sig())) == "val(1)");
  CHECK_THROWS_AS(parse_formula("val(1/2)", graph_sig()), FormatError);
  auto g = std::make_shared<const FiniteChain>(chains::godel4());
  auto sig = expand_with_truth_constants(graph_sig(), g);
  Formula h = parse_formula("val(3/4)", sig);
  CHECK(h == Formula::truth(g, 2));
  CHECK(render_formula(h) == "val(3/4)");
}

TEST_CASE("degree-2 axiom") {
  Formula f = parse_formula("forall x. exists y z. (not (y ~ z) /\\ R(x,y) /\\ R(x,z))",
                            graph_sig());
  auto R = [](const char* a, const char* b) {
    return Formula::atom("R", {Term::var(a), Term::var(b)});
  };
  Formula body = Formula::binary(
      Connective::Meet,
      Formula::binary(Connective::Meet,
                      Formula::negation(Formula::equal(Term::var("y"), Term::var("z"))),
                      R("x", "y")),
      R("x", "z"));
  CHECK(f == Formula::forall("x", Formula::exists("y", Formula::exists("z", body))));
}

TEST_CASE("precedence and associativity") {
  Signature s;
  for (auto p : {"A", "B", "C"}) s.add_predicate(p, 0);
  auto A = Formula::atom("A"), B = Formula::atom("B"), C = Formula::atom("C");
  using enum Connective;
  CHECK(parse_formula("A -> B -> C", s) == Formula::binary(Implies, A, Formula::binary(Implies, B, C)));
  CHECK(parse_formula("A <-> B <-> C", s) == Formula::binary(Iff, Formula::binary(Iff, A, B), C));
  CHECK(parse_formula("A & B /\\ C", s) == Formula::binary(Meet, Formula::binary(Strong, A, B), C));
  CHECK(parse_formula("A \\/ B /\\ C", s) == Formula::binary(Join, A, Formula::binary(Meet, B, C)));
  CHECK(parse_formula("not A & B", s) == Formula::binary(Strong, Formula::negation(A), B));
  CHECK(parse_formula("A -> forall x. B /\\ C", s) ==
        Formula::binary(Implies, A, Formula::forall("x", Formula::binary(Meet, B, C))));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_formula("R(x,", graph_sig());
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.span().line == 1);
    CHECK(e.span().column >= 4);
  }
  CHECK_THROWS_AS(parse_formula("R(x)", graph_sig()), FormatError);
  CHECK_THROWS_AS(parse_formula("Q(x)", graph_sig()), FormatError);
  CHECK_THROWS_AS(parse_formula("R(x,y) &", graph_sig()), FormatError);
}

TEST_CASE("theory files name the failing line") {
  auto t = parse_theory("# axioms\nforall x. (R(x,x) -> val(0))\n\nforall x y. (R(x,y) -> R(y,x))\n",
                        graph_sig());
  CHECK(t.size() == 2);
  try {
    parse_theory("forall x. R(x,x)\nR(x,\n", graph_sig());
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("render then parse is the identity on random formulas") {
  testing::RandomFormulas gen(std::make_shared<const FiniteChain>(chains::godel4()));
  std::mt19937 rng(5);
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.formula(rng, 5);
    std::string text = render_formula(f);
    Formula back = parse_formula(text, gen.sig);
    CHECK_MESSAGE(back == f, text);
    CHECK(render_formula(back) == text);
  }
}

TEST_CASE("signature inference") {
  auto sig = infer_signature("forall x. exists y. (R(x,y) /\\ f(x) ~ g(y, x) /\\ P(h(x)))");
  CHECK(sig.predicate_arity("R") == 2);
  CHECK(sig.predicate_arity("P") == 1);
  CHECK(sig.function_arity("f") == 1);
  CHECK(sig.function_arity("g") == 2);
  CHECK(sig.function_arity("h") == 1);
  CHECK(infer_signature("val(1/2) -> Q").predicates().empty());
  CHECK_THROWS_AS(infer_signature("R(x) /\\ R(x,y)"), ParseError);
  auto f = parse_formula("forall x. exists y. R(x,y)", infer_signature("forall x. exists y. R(x,y)"));
  CHECK(classify_prenex(f).to_string() == "Forall(2)");
}
