// Acceptance suite: one PASS/FAIL line per criterion, each with a pinned
// wall-clock limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gradedmt/diagrams.hh"
#include "gradedmt/error.hh"
#include "gradedmt/io.hh"
#include "gradedmt/parallel.hh"
#include "gradedmt/parser.hh"
#include "gradedmt/preservation.hh"
#include "gradedmt/semantics.hh"
#include "random_formula.hh"

using namespace gradedmt;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = GRADEDMT_CORPUS_DIR;

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<std::string()> check;  // empty string on success
};

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string expect(bool cond, const std::string& what) { return cond ? "" : what; }

#define REQUIRE_OR_RETURN(cond, what) \
  do {                                 \
    if (!(cond)) return what;          \
  } while (0)

std::string counterexample() {
  auto r = reproduce_counterexample();
  REQUIRE_OR_RETURN(r.forall_in_m == "3/4", "forall x. P(x) in M is " + r.forall_in_m);
  REQUIRE_OR_RETURN(r.forall_in_n == "1/2", "forall x. P(x) in N is " + r.forall_in_n);
  REQUIRE_OR_RETURN(r.sentence_in_m == "1", "expanded sentence in M is " + r.sentence_in_m);
  REQUIRE_OR_RETURN(r.sentence_in_n == "1/2", "expanded sentence in N is " + r.sentence_in_n);
  REQUIRE_OR_RETURN(r.base_equivalent, "M and N are separated over {P} at depth 2");
  REQUIRE_OR_RETURN(r.substructures_satisfy, "a substructure of M fails the sentence");

  // The bundled files give the same values.
  io::AlgebraCache cache;
  auto m = io::load_structure(kCorpus / "structures/M.json", cache);
  auto n = io::load_structure(kCorpus / "structures/N.json", cache);
  Signature sig = expand_with_truth_constants(m.signature(), m.chain_ptr());
  Formula all = parse_formula("forall x. P(x)", sig);
  Formula expanded = parse_formula("val(3/4) -> forall x. P(x)", sig);
  REQUIRE_OR_RETURN(m.chain().label(eval_formula(all, m)) == "3/4", "file M disagrees");
  REQUIRE_OR_RETURN(n.chain().label(eval_formula(all, n)) == "1/2", "file N disagrees");
  REQUIRE_OR_RETURN(m.chain().label(eval_formula(expanded, m)) == "1", "file M expansion");
  REQUIRE_OR_RETURN(n.chain().label(eval_formula(expanded, n)) == "1/2", "file N expansion");
  Budget budget(Budget::kDefault);
  REQUIRE_OR_RETURN(equiv_up_to_depth(m, n, 2, m.signature(), budget).equivalent,
                    "file M and N are not equivalent to depth 2");
  return "";
}

std::string algebra_soundness() {
  for (const char* name : {"godel4", "luk3", "boolean2"}) {
    const fs::path path = kCorpus / "algebras" / (std::string(name) + ".json");
    auto raw = io::read_json(path);
    auto c = io::load_algebra(path);
    REQUIRE_OR_RETURN(validate_chain(c->tables()).ok(), std::string(name) + " fails validation");
    const int k = c->size();
    for (int x = 0; x < k; ++x)
      for (int y = 0; y < k; ++y)
        for (int z = 0; z < k; ++z)
          REQUIRE_OR_RETURN((c->star(x, y) <= z) == (x <= c->implies(y, z)),
                            std::string(name) + " breaks residuation at (" +
                                std::to_string(x) + "," + std::to_string(y) + "," +
                                std::to_string(z) + ")");
    REQUIRE_OR_RETURN(derive_residuum(raw["star"].get<Table2>()) == raw["implies"].get<Table2>(),
                      std::string(name) + ": derived residuum differs from the stored table");
  }
  return "";
}

SuiteOptions suite_options(std::size_t instances) {
  SuiteOptions o;
  o.seed = 20240601;
  o.instances = instances;
  o.jobs = jobs();
  o.max_chain_size = 4;
  o.max_domain = 4;
  o.bounds = {2, 2, true};
  return o;
}

std::string universal_suite() {
  auto o = suite_options(200);
  auto lemma = run_substructure_suite(o, PrenexClass::forall_n(1));
  REQUIRE_OR_RETURN(lemma.sentences_checked > 0, "no sentences generated");
  REQUIRE_OR_RETURN(lemma.ok(), std::to_string(lemma.violation_count) +
                                    " violations, first: " + lemma.violations[0].formula);
  auto control = run_substructure_suite(o, PrenexClass::exists_n(1));
  REQUIRE_OR_RETURN(control.violation_count > 0, "negative control found no violation");
  std::printf("    %llu Forall(1) sentence checks, %llu Exists(1) control violations\n",
              static_cast<unsigned long long>(lemma.sentences_checked),
              static_cast<unsigned long long>(control.violation_count));
  return "";
}

std::string union_suite() {
  auto o = suite_options(100);
  auto r = run_union_suite(o, PrenexClass::forall_n(2));
  REQUIRE_OR_RETURN(r.sentences_checked > 0, "no sentences generated");
  REQUIRE_OR_RETURN(r.ok(), std::to_string(r.violation_count) +
                                " violations, first: " + r.violations[0].formula);
  std::printf("    %llu Forall(2) sentence checks\n",
              static_cast<unsigned long long>(r.sentences_checked));
  return "";
}

std::vector<Structure> all_graphs(const ChainPtr& chain, int size, const std::string& prefix) {
  Signature sig;
  sig.add_predicate("R", 2);
  std::vector<Structure> out;
  Budget budget(Budget::kDefault);
  for_each_structure(sig, chain, size, budget, [&](const Structure& s) {
    std::vector<std::string> dom;
    for (int i = 0; i < size; ++i) dom.push_back(prefix + std::to_string(i));
    Structure t(chain, dom);
    t.set_predicate("R", *s.predicate("R"));
    out.push_back(std::move(t));
    return true;
  });
  return out;
}

std::string diagram_sweep() {
  auto chain = io::load_algebra(kCorpus / "algebras/luk3.json");
  std::vector<Structure> sources, targets;
  for (int n = 1; n <= 2; ++n)
    for (auto& s : all_graphs(chain, n, "s")) sources.push_back(std::move(s));
  for (int n = 1; n <= 3; ++n)
    for (auto& t : all_graphs(chain, n, "t")) targets.push_back(std::move(t));

  std::vector<std::uint64_t> embeds(sources.size(), 0), disagreements(sources.size(), 0);
  std::vector<std::string> first(sources.size());
  parallel_for(sources.size(), jobs(), [&](std::size_t i) {
    Budget budget(Budget::kDefault);
    Diagram d = build_diagram(sources[i], DiagramKind::Diag, {}, budget);
    for (const auto& t : targets) {
      Budget per(Budget::kDefault);
      auto r = diagram_embedding_equivalence(sources[i], d, t, per);
      embeds[i] += r.embedding_side;
      if (!r.agree()) {
        if (!disagreements[i]++) first[i] = "source " + std::to_string(i);
      }
    }
  });
  std::uint64_t total_embeds = 0, total_bad = 0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    total_embeds += embeds[i];
    total_bad += disagreements[i];
  }
  std::printf("    %zu x %zu instances, %llu with an embedding\n", sources.size(), targets.size(),
              static_cast<unsigned long long>(total_embeds));
  for (std::size_t i = 0; i < sources.size(); ++i)
    if (disagreements[i]) return std::to_string(total_bad) + " disagreements, first at " + first[i];
  REQUIRE_OR_RETURN(total_embeds > 0, "no instance embeds");
  return "";
}

std::string amalgamation() {
  io::AlgebraCache cache;
  Budget budget(Budget::kDefault);
  for (const char* name : {"trivial", "grow", "twins"}) {
    auto inst = io::load_amalgam_instance(kCorpus / "amalgams" / (std::string(name) + ".json"),
                                          cache);
    for (int n : {1, 2}) {
      AmalgamOptions opt;
      opt.n = n;
      opt.depth = 2;
      opt.variables = 2;
      auto r = search_amalgam(inst, opt, budget);
      const std::string tag = std::string(name) + " n=" + std::to_string(n);
      REQUIRE_OR_RETURN(r.status == AmalgamStatus::Found,
                        tag + ": " + amalgam_status_name(r.status));
      const Structure& big = *r.amalgam;
      REQUIRE_OR_RETURN(is_strong_homomorphism(*r.left_map, inst.left, big).ok &&
                            is_embedding(*r.left_map, inst.left, big).ok,
                        tag + ": left map is not a strong embedding");
      if (inst.common)
        for (const auto& l : inst.common->domain())
          REQUIRE_OR_RETURN(big.label(r.left_map->g[inst.left.index_of(l)]) == l,
                            tag + ": left map moves the common part");
      REQUIRE_OR_RETURN(is_substructure(inst.right, big).ok, tag + ": right not a substructure");
      Signature sig = expand_with_truth_constants(inst.right.signature(),
                                                  inst.right.chain_ptr());
      REQUIRE_OR_RETURN(is_elementary_up_to_depth(inclusion_map(inst.right, big), inst.right,
                                                  big, 2, sig, budget, 2).ok,
                        tag + ": right inclusion not elementary to depth 2");
      REQUIRE_OR_RETURN(verify_amalgam(inst, r, opt, budget).ok(), tag + ": replay failed");
    }
  }
  auto mn = io::load_amalgam_instance(kCorpus / "amalgams/mn.json", cache);
  auto r = search_amalgam(mn, {}, budget);
  REQUIRE_OR_RETURN(r.status == AmalgamStatus::PreconditionFailed,
                    std::string("M/N: ") + amalgam_status_name(r.status));
  REQUIRE_OR_RETURN(r.precondition.separating &&
                        render_formula(*r.precondition.separating) ==
                            "exists x1. (P(x1) <-> val(3/4))",
                    "M/N: unexpected separating sentence");
  return "";
}

std::string parser_round_trip() {
  auto chain = std::make_shared<const FiniteChain>(chains::godel4());
  testing::RandomFormulas gen(chain);
  std::mt19937 rng(1000);
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.formula(rng, 1 + i % 5);
    const std::string text = render_formula(f);
    Formula back = parse_formula(text, gen.sig);
    REQUIRE_OR_RETURN(back == f, "round trip changed " + text);
  }
  return "";
}

std::string bounded_consequences() {
  io::AlgebraCache cache;
  Signature sig = io::load_signature(kCorpus / "signatures/weighted_graph.json", cache);
  const ChainPtr& chain = sig.truth_chain();
  auto wg = io::load_theory(kCorpus / "theories/weighted_graph.thy", sig);
  Budget budget(Budget::kDefault);
  auto reversed = parse_formula("forall x y. (R(y,x) -> R(x,y))", sig);
  auto r = bounded_consequence(wg, reversed, sig, chain, 3, budget);
  REQUIRE_OR_RETURN(r.holds, "reversed symmetry is refuted");

  auto symmetry = io::load_theory(kCorpus / "theories/symmetry.thy", sig);
  auto irreflexive = parse_formula("forall x. (R(x,x) -> val(0))", sig);
  auto c = bounded_consequence(symmetry, irreflexive, sig, chain, 3, budget);
  REQUIRE_OR_RETURN(!c.holds && c.countermodel, "symmetry entails irreflexivity");
  REQUIRE_OR_RETURN(c.countermodel->size() == 1, "countermodel has " +
                                                     std::to_string(c.countermodel->size()) +
                                                     " elements");
  REQUIRE_OR_RETURN(is_model(symmetry, *c.countermodel).ok &&
                        !satisfies(irreflexive, *c.countermodel, Assignment{}),
                    "countermodel does not refute");
  return "";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "counterexample reproduction", 10, counterexample},
      {2, "algebra soundness", 1, algebra_soundness},
      {3, "universal preservation under substructures", 120, universal_suite},
      {4, "Forall(2) preservation under unions", 120, union_suite},
      {5, "diagram and embedding oracles agree", 300, diagram_sweep},
      {6, "amalgamation certificates", 60, amalgamation},
      {7, "parser round trip", 10, parser_round_trip},
      {8, "bounded consequence sanity", 30, bounded_consequences},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string why;
    try {
      why = c.check();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (why.empty() && secs > c.limit_seconds) why = "exceeded the time limit";
    failed += !why.empty();
    std::printf("%s criterion %d: %s (%.2f s, limit %.0f s)%s%s\n", why.empty() ? "PASS" : "FAIL",
                c.id, c.title, secs, c.limit_seconds, why.empty() ? "" : ": ", why.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
