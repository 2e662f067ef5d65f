#include <random>

#include "doctest.h"
#include "gradedmt/error.hh"
#include "gradedmt/morphisms.hh"
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

Structure random_graph(ChainPtr chain, int n, std::mt19937& rng, const std::string& prefix = "v") {
  std::vector<Elem> r(n * n);
  for (auto& v : r) v = rng() % chain->size();
  return weighted(chain, samples::numbered(prefix, n), r);
}

Signature graph_sig() {
  Signature s;
  s.add_predicate("R", 2);
  return s;
}

// All g in lexicographic order, checked one by one.
std::optional<std::vector<int>> brute_embedding(const Structure& s, const Structure& t) {
  TupleCounter g(s.size(), t.size());
  do {
    StructureMap m{AlgebraMap::identity(s.chain_ptr()), g.current(), MapKind::Embedding, 0};
    m.f.target = t.chain_ptr();
    if (is_embedding(m, s, t)) return g.current();
  } while (g.next());
  return std::nullopt;
}

}  // namespace

TEST_CASE("strong homomorphism examples") {
  auto g = share(chains::godel4());
  Structure m = samples::constant_predicate(g, {"a", "b"}, "P", 2);
  Structure n = samples::constant_predicate(g, {"a", "b"}, "P", 1);
  CHECK(is_strong_homomorphism(identity_map(m), m, m));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      StructureMap h{AlgebraMap::identity(g), {x, y}, MapKind::Strong, 0};
      auto r = is_strong_homomorphism(h, m, n);
      CHECK_FALSE(r.ok);
      CHECK(r.counterexample.find("f(3/4)") != std::string::npos);
    }

  Structure twins = weighted(g, {"a", "b", "c"}, {0, 0, 2, 0, 0, 2, 2, 2, 0});
  Structure image = weighted(g, {"a", "c"}, {0, 2, 2, 0});
  StructureMap collapse{AlgebraMap::identity(g), {0, 0, 1}, MapKind::Strong, 0};
  CHECK(is_strong_homomorphism(collapse, twins, image));
  CHECK_FALSE(is_embedding(collapse, twins, image));
  CHECK(is_embedding(identity_map(twins), twins, twins));
  CHECK(is_isomorphism(identity_map(twins), twins, twins));
}

TEST_CASE("language and shape mismatches are errors") {
  auto g = share(chains::godel4());
  Structure m = samples::constant_predicate(g, {"a"}, "P", 2);
  Structure k = samples::complete_graph(g, {"a"});
  CHECK_THROWS_AS(is_strong_homomorphism(identity_map(m), m, k), SignatureError);
  StructureMap bad{AlgebraMap::identity(g), {0, 0}, MapKind::Strong, 0};
  CHECK_THROWS_AS(is_strong_homomorphism(bad, m, m), FormatError);
}

TEST_CASE("induced substructures include as embeddings") {
  auto g = share(chains::godel4());
  std::mt19937 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    Structure t = random_graph(g, 4, rng);
    Structure s = induced_substructure(t, {1, 3});
    CHECK(is_substructure(s, t).ok);
    CHECK(is_embedding(inclusion_map(s, t), s, t));
  }
}

TEST_CASE("substructure clauses") {
  auto g = share(chains::godel4());
  Structure t = weighted(g, {"a", "b", "c"}, {0, 3, 2, 3, 0, 1, 2, 1, 0});
  CHECK(is_substructure(t, t).ok);
  Structure s = induced_substructure(t, {0, 2});
  CHECK(is_substructure(s, t).ok);
  Structure off = weighted(g, {"a", "c"}, {0, 1, 2, 0});
  auto r = is_substructure(off, t);
  CHECK(r.clause == 4);
  Structure stranger = weighted(g, {"a", "z"}, {0, 2, 2, 0});
  CHECK(is_substructure(stranger, t).clause == 2);
  Structure wrong_chain = weighted(share(chains::lukasiewicz(2)), {"a"}, {0});
  CHECK(is_substructure(wrong_chain, t).clause == 1);
  Structure sub_chain = weighted(share(restrict_chain(*g, std::vector<Elem>{0, 2, 3})), {"a", "c"}, {0, 1, 1, 0});
  CHECK(is_substructure(sub_chain, t).ok);
}

TEST_CASE("substructure iff equal quantifier-free values") {
  auto g = share(chains::godel4());
  std::mt19937 rng(67);
  std::vector<Formula> qf = parse_theory(
      "R(x,y)\nR(x,y) & R(y,x)\nR(x,x) -> R(y,y)\nx ~ y\nR(x,y) <-> R(y,x) \\/ R(x,x)\n",
      graph_sig());
  for (int trial = 0; trial < 60; ++trial) {
    Structure t = random_graph(g, 3, rng);
    Structure s = trial % 2 ? induced_substructure(t, {0, 2}) : random_graph(g, 2, rng);
    std::vector<std::string> labels{"v0", "v2"};
    Structure renamed(g, labels);
    renamed.set_predicate("R", *s.predicate("R"));
    bool agree = true;
    for (const auto& f : qf)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          agree &= eval_formula(f, renamed, {{"x", x}, {"y", y}}) ==
                   eval_formula(f, t, {{"x", 2 * x}, {"y", 2 * y}});
    CHECK(is_substructure(renamed, t).ok == agree);
  }
}

TEST_CASE("substructure enumeration") {
  auto g = share(chains::godel4());
  int count = 0;
  enumerate_substructures(samples::complete_graph(g, {"a", "b", "c"}), [&](const Structure&) {
    ++count;
    return true;
  });
  CHECK(count == 7);

  Structure withc = samples::complete_graph(g, {"a", "b", "c"});
  withc.set_function("c", {0, {1}});
  std::vector<std::vector<std::string>> doms;
  enumerate_substructures(withc, [&](const Structure& s) {
    doms.push_back(s.domain());
    CHECK(s.find("b"));
    return true;
  });
  CHECK(doms.size() == 4);

  Structure cyc(g, {"a", "b", "c"});
  cyc.set_function("s", {1, {1, 2, 0}});
  count = 0;
  enumerate_substructures(cyc, [&](const Structure& s) {
    CHECK(s.size() == 3);
    ++count;
    return true;
  });
  CHECK(count == 1);

  Structure p = samples::constant_predicate(g, {"a"}, "P", 2);
  std::vector<int> sizes;
  enumerate_substructures(p, [&](const Structure& s) {
    sizes.push_back(s.chain().size());
    CHECK(is_substructure(s, p).ok);
    return true;
  }, true);
  CHECK(sizes == std::vector<int>{4, 3});
}

TEST_CASE("embedding search agrees with brute force") {
  auto g = share(chains::lukasiewicz(2));
  std::mt19937 rng(71);
  Budget b;
  int found = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Structure t = random_graph(g, 3, rng, "t");
    Structure s = trial % 3 == 0 ? induced_substructure(t, {2, 0}) : random_graph(g, 2, rng, "s");
    auto hit = search_strong_embedding(s, t, true, b);
    auto oracle = brute_embedding(s, t);
    REQUIRE(hit.has_value() == oracle.has_value());
    if (hit) {
      ++found;
      CHECK(hit->g == *oracle);
      CHECK(is_embedding(*hit, s, t));
    }
  }
  CHECK(found >= 100);
}

TEST_CASE("search examples") {
  auto g = share(chains::godel4());
  Budget b;
  Structure m = samples::constant_predicate(g, {"a"}, "P", 2);
  Structure n = samples::constant_predicate(g, {"a"}, "P", 1);
  CHECK_FALSE(search_strong_embedding(m, n, true, b));
  auto k2 = samples::complete_graph(g, {"a", "b"});
  auto k3 = samples::complete_graph(g, {"x", "y", "z"});
  auto e = search_strong_embedding(k2, k3, true, b);
  REQUIRE(e);
  CHECK(e->g == std::vector<int>{0, 1});
  auto h = search_strong_homomorphism(k3, k2, true, b);
  CHECK_FALSE(h);

  // Free f: the Goedel 4-chain maps {0,3/4,1} onto {0,1/2,1} only by
  // changing which of 1/2, 3/4 is hit, so no injective f sends 3/4 to 1/2.
  CHECK_FALSE(search_strong_embedding(m, n, false, b));
  auto bool_chain = share(chains::boolean());
  Structure crisp = samples::constant_predicate(bool_chain, {"a"}, "P", 1);
  auto collapse = search_strong_homomorphism(m, crisp, false, b);
  REQUIRE(collapse);
  CHECK(collapse->f.map == std::vector<Elem>{0, 1, 1, 1});
}

TEST_CASE("strong homomorphisms compose") {
  auto g = share(chains::godel(std::vector<std::string>{"0", "1/2", "1"}));
  std::mt19937 rng(73);
  Budget b;
  // Values 0 and 1 only, so that maps exist often.
  auto crisp = [&](int n, const std::string& prefix) {
    std::vector<Elem> r(n * n);
    for (auto& v : r) v = rng() % 2 ? 2 : 0;
    return weighted(g, samples::numbered(prefix, n), r);
  };
  int composed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Structure c = crisp(3, "c");
    Structure mid = induced_substructure(c, {static_cast<int>(rng() % 2), 2});
    Structure a = trial % 2 ? induced_substructure(mid, {0}) : crisp(2, "a");
    MapSearch any{false, false, {}};
    for_each_strong_map(a, mid, any, b, [&](const StructureMap& h1) {
      for_each_strong_map(mid, c, any, b, [&](const StructureMap& h2) {
        ++composed;
        CHECK(is_strong_homomorphism(compose(h1, h2), a, c));
        return true;
      });
      return true;
    });
  }
  CHECK(composed > 50);
}

TEST_CASE("elementarity up to a depth") {
  auto g = share(chains::godel4());
  Budget b;
  Signature unary;
  unary.add_predicate("P", 1);
  Structure s = samples::constant_predicate(g, {"a", "b"}, "P", 2);
  Structure s3 = samples::constant_predicate(g, {"a", "b", "c"}, "P", 2);
  CHECK(is_elementary_up_to_depth(identity_map(s), s, s, 2, unary, b).ok);
  auto inc = is_elementary_up_to_depth(inclusion_map(s, s3), s, s3, 2, unary, b);
  CHECK(inc.ok);
  CHECK(inc.variables == 2);

  auto k2 = samples::complete_graph(g, {"a", "b"});
  auto k3 = samples::complete_graph(g, {"a", "b", "c"});
  auto r = is_elementary_up_to_depth(inclusion_map(k2, k3), k2, k3, 2, graph_sig(), b, 3);
  REQUIRE_FALSE(r.ok);
  REQUIRE(r.separating);
  Assignment src, tgt;
  for (int v = 0; v < 3; ++v) {
    src["x" + std::to_string(v + 1)] = r.tuple[v];
    tgt["x" + std::to_string(v + 1)] = r.tuple[v];
  }
  CHECK(eval_formula(*r.separating, k2, src) == r.source_value);
  CHECK(eval_formula(*r.separating, k3, tgt) == r.target_value);
  CHECK(r.source_value != r.target_value);
  CHECK(is_elementary_up_to_depth(inclusion_map(k2, k3), k2, k3, 2, graph_sig(), b, 2).ok);

  Structure n = samples::constant_predicate(g, {"a", "b"}, "P", 1);
  StructureMap bad{AlgebraMap::identity(g), {0, 1}, MapKind::Elementary, 2};
  auto nope = is_elementary_up_to_depth(bad, s, n, 1, unary, b);
  CHECK_FALSE(nope.ok);
  CHECK_FALSE(nope.reason.empty());
}
