// Command-line front end for the graded model theory toolkit.
//
// Exit status: 0 when the check passes, 1 when it finds a violation or a
// negative answer, 2 for usage and input errors, 3 when a search runs out
// of budget.

#include <functional>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "gradedmt/corpus.hh"
#include "gradedmt/error.hh"
#include "gradedmt/parser.hh"
#include "report.hh"

using namespace gradedmt;
using cli::Json;
using cli::formula_or_null;
using cli::map_json;

namespace {

Json tagged(const char* command, const Json& body) {
  Json j{{"command", command}};
  j.update(body);
  return j;
}

struct Outcome {
  Json report;
  std::string text;
  int code = 0;
};

struct Common {
  std::string format = "text";
  int jobs = 1;
  std::uint64_t seed = 1;
  std::string output;
  std::uint64_t budget = 0;

  Budget make_budget() const { return budget ? Budget(budget) : Budget::from_env(); }
};

Outcome finish(Json report, std::string text, bool ok) {
  return {std::move(report), std::move(text), ok ? 0 : 1};
}

Signature with_truth(const Structure& s) {
  return expand_with_truth_constants(s.signature(), s.chain_ptr());
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Relabels each member so that it literally contains its predecessor: the
// first strong embedding (identity on the algebra) fixes the images.
std::vector<Structure> normalize_chain(std::vector<Structure> members, Budget& budget) {
  for (std::size_t i = 1; i < members.size(); ++i) {
    const Structure& prev = members[i - 1];
    const Structure& next = members[i];
    auto e = search_strong_embedding(prev, next, true, budget);
    if (!e)
      throw PreconditionError("member " + std::to_string(i - 1) +
                              " does not embed into member " + std::to_string(i));
    std::vector<std::string> labels(next.size());
    std::set<std::string> used;
    for (int d = 0; d < prev.size(); ++d) {
      labels[e->g[d]] = prev.label(d);
      used.insert(prev.label(d));
    }
    int fresh = 0;
    for (auto& l : labels)
      while (l.empty()) {
        std::string cand = "u" + std::to_string(i) + "_" + std::to_string(fresh++);
        if (!used.contains(cand)) l = cand;
      }
    // Reorder so that the predecessor's elements come first, in its order.
    std::vector<int> order(e->g.begin(), e->g.end());
    for (int d = 0; d < next.size(); ++d)
      if (std::find(order.begin(), order.end(), d) == order.end()) order.push_back(d);
    std::vector<std::string> dom;
    for (int d : order) dom.push_back(labels[d]);
    Structure out(next.chain_ptr(), dom);
    std::vector<int> pos(next.size());
    for (int k = 0; k < next.size(); ++k) pos[order[k]] = k;
    for (const auto& [name, t] : next.predicates()) {
      PredicateTable pt{t.arity, std::vector<Elem>(t.values.size())};
      TupleCounter d(t.arity, next.size());
      do {
        std::vector<int> moved;
        for (int x : d.current()) moved.push_back(pos[x]);
        pt.values[table_index(moved, next.size())] = next.predicate_value(name, d.current());
      } while (d.next());
      out.set_predicate(name, std::move(pt));
    }
    for (const auto& [name, t] : next.functions()) {
      FunctionTable ft{t.arity, std::vector<int>(t.values.size())};
      TupleCounter d(t.arity, next.size());
      do {
        std::vector<int> moved;
        for (int x : d.current()) moved.push_back(pos[x]);
        ft.values[table_index(moved, next.size())] = pos[next.function_value(name, d.current())];
      } while (d.next());
      out.set_function(name, std::move(ft));
    }
    members[i] = std::move(out);
  }
  return members;
}

std::vector<std::string> split_labels(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ','))
    if (!part.empty()) out.push_back(part);
  return out;
}

DiagramKind parse_kind(const std::string& k) {
  if (k == "diag") return DiagramKind::Diag;
  if (k == "eldiag") return DiagramKind::ElDiag;
  throw CLI::ValidationError("--kind", "expected diag or eldiag");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model theory over finite MTL-chains"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", common.seed, "Seed for randomized suites");
  app.add_option("--output", common.output, "Write the report to this file");
  app.add_option("--budget", common.budget,
                 "Search budget (default: GRADEDMT_BUDGET or 200000000)");

  std::function<Outcome()> run;
  io::AlgebraCache cache;

  // Options shared by several subcommands.
  std::string structure, target, left, right, formula, signature, theory, chain_file,
      instance, kind = "diag", generators, m_value = "3/4", n_value = "1/2",
      threshold = "3/4", suite;
  std::vector<std::string> assign;
  int depth = 1, variables = 0, n = 1, max_domain = 3, max_size = 3,
      elementary_depth = -1, max_chain_size = 4;
  std::size_t instances = 200;
  bool free_algebra = false, with_subalgebras = false, no_truth = false, disjoint = false,
       normalize = false, truth_constants = false;

  auto* eval = app.add_subcommand("eval", "Truth value of a formula in a structure");
  eval->add_option("--structure", structure)->required()->check(CLI::ExistingFile);
  eval->add_option("--formula", formula)->required();
  eval->add_option("--assign", assign, "Variable assignment x=label");
  eval->callback([&] {
    run = [&] {
      Structure s = io::load_structure(structure, cache);
      Formula f = parse_formula(formula, with_truth(s));
      Assignment v;
      for (const auto& a : assign) {
        auto eq = a.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--assign", "expected x=label");
        v[a.substr(0, eq)] = s.index_of(a.substr(eq + 1));
      }
      for (const auto& x : free_variables(f))
        if (!v.contains(x)) throw EvalError("free variable '" + x + "' is not assigned");
      Elem e = eval_formula(f, s, v);
      return finish({{"command", "eval"},
                     {"formula", render_formula(f)},
                     {"value", s.chain().label(e)},
                     {"satisfied", e == s.chain().top()}},
                    s.chain().label(e), true);
    };
  });

  auto* classify = app.add_subcommand("classify", "Prenex class of a formula");
  classify->add_option("--formula", formula)->required();
  classify->add_option("--signature", signature)->check(CLI::ExistingFile);
  classify->callback([&] {
    run = [&] {
      Signature sig = signature.empty() ? infer_signature(formula)
                                        : io::load_signature(signature, cache);
      Formula f = parse_formula(formula, sig);
      std::string c = classify_prenex(f).to_string();
      return finish({{"command", "classify"}, {"formula", render_formula(f)}, {"class", c}},
                    c, true);
    };
  });

  auto* check_sub = app.add_subcommand("check-sub", "Whether one structure is a substructure of another");
  check_sub->add_option("--structure", structure, "Candidate substructure")
      ->required()->check(CLI::ExistingFile);
  check_sub->add_option("--target", target)->required()->check(CLI::ExistingFile);
  check_sub->callback([&] {
    run = [&] {
      auto r = is_substructure(io::load_structure(structure, cache),
                               io::load_structure(target, cache));
      return finish({{"command", "check-sub"}, {"ok", r.ok}, {"clause", r.clause},
                     {"detail", r.detail}},
                    r.ok ? "substructure"
                         : "not a substructure (clause " + std::to_string(r.clause) + "): " +
                               r.detail,
                    r.ok);
    };
  });

  auto* enum_subs = app.add_subcommand("enum-subs", "List the substructures of a structure");
  enum_subs->add_option("--structure", structure)->required()->check(CLI::ExistingFile);
  enum_subs->add_flag("--with-subalgebras", with_subalgebras,
                      "Also vary the algebra over its subalgebras");
  enum_subs->callback([&] {
    run = [&] {
      Structure t = io::load_structure(structure, cache);
      Json list = Json::array();
      std::string text;
      enumerate_substructures(t, [&](const Structure& s) {
        list.push_back({{"domain", s.domain()}, {"algebra", s.chain().labels()}});
        std::string line = "{";
        for (int i = 0; i < s.size(); ++i) line += (i ? "," : "") + s.label(i);
        line += "}";
        if (with_subalgebras) {
          line += " over {";
          for (int i = 0; i < s.chain().size(); ++i)
            line += (i ? "," : "") + s.chain().label(i);
          line += "}";
        }
        text += line + "\n";
        return true;
      }, with_subalgebras);
      if (!text.empty()) text.pop_back();
      return finish({{"command", "enum-subs"}, {"count", list.size()},
                     {"substructures", list}},
                    text, true);
    };
  });

  auto add_map_search = [&](const char* name, const char* help, bool embedding) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--structure", structure, "Source")->required()->check(CLI::ExistingFile);
    sub->add_option("--target", target)->required()->check(CLI::ExistingFile);
    sub->add_flag("--free-algebra", free_algebra,
                  "Search over algebra maps too instead of the identity");
    sub->callback([&, name, embedding] {
      run = [&, name, embedding] {
        Structure s = io::load_structure(structure, cache);
        Structure t = io::load_structure(target, cache);
        Budget budget = common.make_budget();
        auto m = embedding ? search_strong_embedding(s, t, !free_algebra, budget)
                           : search_strong_homomorphism(s, t, !free_algebra, budget);
        Json j{{"command", name}, {"found", m.has_value()}};
        j["map"] = m ? map_json(*m, s, t) : Json(nullptr);
        return finish(j, m ? cli::map_text(*m, s, t) : "none", m.has_value());
      };
    });
  };
  add_map_search("find-hom", "Search a strong homomorphism", false);
  add_map_search("find-embed", "Search a strong embedding", true);

  auto* diagram = app.add_subcommand("diagram", "Materialize Diag or ElDiag of a structure");
  diagram->add_option("--structure", structure)->required()->check(CLI::ExistingFile);
  diagram->add_option("--kind", kind)->check(CLI::IsMember({"diag", "eldiag"}));
  diagram->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  diagram->add_option("--variables", variables)->check(CLI::NonNegativeNumber);
  diagram->callback([&] {
    run = [&] {
      Structure s = io::load_structure(structure, cache);
      Budget budget = common.make_budget();
      Diagram d = build_diagram(s, parse_kind(kind), {depth, variables}, budget);
      Json entries = Json::array();
      for (const auto& e : d.entries)
        entries.push_back({{"sentence", render_formula(e.sentence)},
                           {"value", d.chain->label(e.value)}});
      std::string text = render_diagram(d);
      if (!text.empty() && text.back() == '\n') text.pop_back();
      return finish({{"command", "diagram"}, {"kind", kind}, {"depth", depth},
                     {"variables", variables}, {"count", entries.size()},
                     {"entries", entries}},
                    text, true);
    };
  });

  auto* check_diagram = app.add_subcommand(
      "check-diagram", "Compare 'T models the diagram of S' with 'S embeds into T'");
  check_diagram->add_option("--structure", structure)->required()->check(CLI::ExistingFile);
  check_diagram->add_option("--target", target)->required()->check(CLI::ExistingFile);
  check_diagram->add_option("--kind", kind)->check(CLI::IsMember({"diag", "eldiag"}));
  check_diagram->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  check_diagram->add_option("--variables", variables)->check(CLI::NonNegativeNumber);
  check_diagram->callback([&] {
    run = [&] {
      Structure s = io::load_structure(structure, cache);
      Structure t = io::load_structure(target, cache);
      Budget budget = common.make_budget();
      auto r = diagram_embedding_equivalence(s, t, parse_kind(kind), {depth, variables}, budget);
      Json interp = Json::object();
      for (std::size_t i = 0; i < r.interpretation.size(); ++i)
        interp[domain_constant_name(s.label(static_cast<int>(i)))] =
            t.label(r.interpretation[i]);
      Json j{{"command", "check-diagram"},
             {"kind", kind},
             {"diagram_side", r.diagram_side},
             {"embedding_side", r.embedding_side},
             {"agree", r.agree()},
             {"interpretation", r.interpretation.empty() ? Json(nullptr) : interp}};
      j["embedding"] = r.embedding ? map_json(*r.embedding, s, t) : Json(nullptr);
      return finish(j,
                    "models diagram: " + yes_no(r.diagram_side) +
                        "\nembeds: " + yes_no(r.embedding_side) +
                        "\nagree: " + yes_no(r.agree()),
                    r.agree());
    };
  });

  auto* equiv = app.add_subcommand("equiv", "Elementary equivalence up to a depth");
  equiv->add_option("--left", left)->required()->check(CLI::ExistingFile);
  equiv->add_option("--right", right)->required()->check(CLI::ExistingFile);
  equiv->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  equiv->add_option("--variables", variables)->check(CLI::NonNegativeNumber);
  equiv->add_flag("--truth-constants", truth_constants,
                  "Add the chain's truth constants to the language");
  equiv->callback([&] {
    run = [&] {
      Structure a = io::load_structure(left, cache);
      Structure b = io::load_structure(right, cache);
      Budget budget = common.make_budget();
      Signature sig = truth_constants ? with_truth(a) : a.signature();
      auto r = equiv_up_to_depth(a, b, depth, sig, budget, variables);
      Json j{{"command", "equiv"}, {"depth", r.depth}, {"variables", r.variables},
             {"equivalent", r.equivalent}, {"separating", formula_or_null(r.separating)}};
      std::string text = r.equivalent ? "equivalent" : "not equivalent";
      if (r.separating) {
        j["left_value"] = a.chain().label(r.left_value);
        j["right_value"] = b.chain().label(r.right_value);
        text += ": " + render_formula(*r.separating) + " is " + a.chain().label(r.left_value) +
                " on the left and " + b.chain().label(r.right_value) + " on the right";
      }
      return finish(j, text, r.equivalent);
    };
  });

  auto* union_cmd = app.add_subcommand("union", "Union of a chain of structures");
  union_cmd->add_option("--chain", chain_file)->required()->check(CLI::ExistingFile);
  union_cmd->add_flag("--normalize", normalize,
                      "Relabel members along embeddings before taking the union");
  union_cmd->callback([&] {
    run = [&] {
      auto members = io::load_chain_file(chain_file, cache);
      Budget budget = common.make_budget();
      if (normalize) members = normalize_chain(std::move(members), budget);
      StructureChain c = validate_chain_of_structures(std::move(members));
      if (!c.is_chain)
        return finish({{"command", "union"}, {"is_chain", false}, {"reason", c.reason},
                       {"union", nullptr}},
                      "not a chain: " + c.reason, false);
      Json u = io::structure_to_json(union_of_chain(c));
      return finish({{"command", "union"}, {"is_chain", true}, {"reason", ""}, {"union", u}},
                    u.dump(2), true);
    };
  });

  auto* check_chain = app.add_subcommand("check-chain", "Validate a chain and run Tarski-Vaught checks");
  check_chain->add_option("--chain", chain_file)->required()->check(CLI::ExistingFile);
  check_chain->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  check_chain->add_option("--variables", variables)->check(CLI::NonNegativeNumber);
  check_chain->add_option("--elementary-depth", elementary_depth,
                          "Certify pairwise elementarity to this depth first");
  check_chain->add_flag("--normalize", normalize);
  check_chain->callback([&] {
    run = [&] {
      auto members = io::load_chain_file(chain_file, cache);
      Budget budget = common.make_budget();
      if (normalize) members = normalize_chain(std::move(members), budget);
      StructureChain c = validate_chain_of_structures(std::move(members));
      Json j{{"command", "check-chain"}, {"is_chain", c.is_chain}, {"reason", c.reason}};
      if (!c.is_chain) {
        j["elementary_depth"] = nullptr;
        j["tarski_vaught"] = nullptr;
        return finish(j, "not a chain: " + c.reason, false);
      }
      if (elementary_depth >= 0) certify_elementary(c, elementary_depth, budget, variables);
      j["elementary_depth"] = c.elementary_depth ? Json(*c.elementary_depth) : Json(nullptr);
      auto tv = check_tarski_vaught(c, depth, budget, variables);
      j["tarski_vaught"] = cli::tarski_vaught_json(tv, c);
      bool ok = tv.quantifier_free_ok && tv.elementary_ok;
      std::string text = "chain of " + std::to_string(c.members.size()) + " structures\n" +
                         "elementary: " +
                         (c.elementary_depth ? "to depth " + std::to_string(*c.elementary_depth)
                                             : std::string("not certified")) +
                         "\nquantifier-free values kept in the union: " +
                         yes_no(tv.quantifier_free_ok);
      if (tv.elementary_checked)
        text += "\nall generated values kept in the union: " + yes_no(tv.elementary_ok);
      if (tv.formula) text += "\nfails on: " + render_formula(*tv.formula);
      return finish(j, text, ok);
    };
  });

  auto* implies = app.add_subcommand("implies-exists",
                                     "Whether Exists(n) sentences transfer from left to right");
  implies->add_option("--left", left)->required()->check(CLI::ExistingFile);
  implies->add_option("--right", right)->required()->check(CLI::ExistingFile);
  implies->add_option("--generators", generators, "Comma-separated common labels");
  implies->add_option("--n", n)->check(CLI::PositiveNumber);
  implies->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  implies->add_option("--variables", variables)->check(CLI::NonNegativeNumber);
  implies->add_flag("--no-truth-constants", no_truth);
  implies->callback([&] {
    run = [&] {
      Structure a = io::load_structure(left, cache);
      Structure b = io::load_structure(right, cache);
      Budget budget = common.make_budget();
      GenerationBounds bounds{depth, variables ? variables : 2, !no_truth};
      auto r = implies_exists_n(a, b, split_labels(generators), n, bounds, budget);
      Json j = cli::implies_json(r, a);
      j = tagged("implies-exists", j);
      std::string text = r.holds ? "holds" : "fails: " + render_formula(*r.separating) +
                                                 " is " + a.chain().label(r.left_value) +
                                                 " on the left and " +
                                                 b.chain().label(r.right_value) +
                                                 " on the right";
      return finish(j, text, r.holds);
    };
  });

  auto* amalgamate = app.add_subcommand("amalgamate", "Bounded amalgamation search");
  amalgamate->add_option("--instance", instance)->required()->check(CLI::ExistingFile);
  amalgamate->add_option("--n", n)->check(CLI::Range(1, 2));
  amalgamate->add_option("--max-size", max_size)->check(CLI::PositiveNumber);
  amalgamate->add_option("--depth", depth, "Elementarity depth on the right (default 2)");
  amalgamate->add_option("--variables", variables)->check(CLI::NonNegativeNumber);
  amalgamate->add_flag("--disjoint", disjoint,
                       "Send new left elements to new elements only");
  amalgamate->add_flag("--no-truth-constants", no_truth);
  amalgamate->callback([&] {
    run = [&] {
      AmalgamInstance inst = io::load_amalgam_instance(instance, cache);
      AmalgamOptions opt;
      opt.n = n;
      opt.max_size = max_size;
      opt.depth = amalgamate->count("--depth") ? depth : 2;
      opt.variables = variables;
      opt.disjoint = disjoint;
      opt.truth_constants = !no_truth;
      opt.generation.truth_constants = !no_truth;
      Budget budget = common.make_budget();
      auto r = search_amalgam(inst, opt, budget);
      Json j{{"command", "amalgamate"},
             {"instance", inst.name},
             {"n", n},
             {"bounds", {{"max_size", max_size}, {"depth", opt.depth},
                         {"variables", variables}, {"disjoint", disjoint},
                         {"truth_constants", !no_truth}}},
             {"status", amalgam_status_name(r.status)},
             {"precondition", cli::implies_json(r.precondition, inst.left)},
             {"candidates", r.candidates},
             {"budget_exhausted", r.budget_exhausted}};
      if (n == 2)
        j["note"] = "Forall(1) preservation on the left is checked only for generated "
                    "formulas within the bounds";
      std::string text = std::string("status: ") + amalgam_status_name(r.status);
      bool ok = false;
      if (r.status == AmalgamStatus::Found) {
        auto v = verify_amalgam(inst, r, opt, budget);
        ok = v.ok();
        j["amalgam"] = io::structure_to_json(*r.amalgam);
        j["left_map"] = map_json(*r.left_map, inst.left, *r.amalgam);
        j["right_map"] = map_json(*r.right_map, inst.right, *r.amalgam);
        j["verification"] = {{"left_embedding", v.left_embedding},
                             {"right_substructure", v.right_substructure},
                             {"right_elementary", v.right_elementary},
                             {"left_forall1", v.left_forall1},
                             {"ok", v.ok()},
                             {"detail", v.detail}};
        text += "\nsize: " + std::to_string(r.amalgam->size()) + "\nleft map:\n" +
                cli::map_text(*r.left_map, inst.left, *r.amalgam) +
                "\nverified: " + yes_no(ok);
      } else if (r.status == AmalgamStatus::PreconditionFailed) {
        text += "\nseparating: " + render_formula(*r.precondition.separating);
      } else {
        text += "\nno amalgam within the bounds (inconclusive)";
      }
      return finish(j, text, ok);
    };
  });

  auto* consequence = app.add_subcommand("consequence", "Bounded semantic consequence");
  consequence->add_option("--theory", theory)->required()->check(CLI::ExistingFile);
  consequence->add_option("--signature", signature)->required()->check(CLI::ExistingFile);
  consequence->add_option("--formula", formula)->required();
  consequence->add_option("--max-domain", max_domain)->check(CLI::PositiveNumber);
  consequence->callback([&] {
    run = [&] {
      Signature sig = io::load_signature(signature, cache);
      if (!sig.truth_chain())
        throw CLI::ValidationError("--signature", "the signature file must name an algebra");
      auto thy = io::load_theory(theory, sig);
      Formula phi = parse_formula(formula, sig);
      Budget budget = common.make_budget();
      auto r = bounded_consequence(thy, phi, sig, sig.truth_chain(), max_domain, budget);
      Json j{{"command", "consequence"}, {"formula", render_formula(phi)},
             {"max_domain", max_domain}, {"holds", r.holds},
             {"structures_checked", r.structures_checked}};
      j["countermodel"] = r.countermodel ? io::structure_to_json(*r.countermodel) : Json(nullptr);
      std::string text = r.holds ? "holds up to size " + std::to_string(max_domain)
                                 : "refuted by\n" + io::structure_to_json(*r.countermodel).dump(2);
      return finish(j, text, r.holds);
    };
  });

  auto* universal = app.add_subcommand("universal-consequences",
                                       "Generated Forall(1) consequences of a theory");
  universal->add_option("--theory", theory)->required()->check(CLI::ExistingFile);
  universal->add_option("--signature", signature)->required()->check(CLI::ExistingFile);
  universal->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  universal->add_option("--variables", variables)->check(CLI::NonNegativeNumber);
  universal->add_option("--max-domain", max_domain)->check(CLI::PositiveNumber);
  universal->callback([&] {
    run = [&] {
      Signature sig = io::load_signature(signature, cache);
      if (!sig.truth_chain())
        throw CLI::ValidationError("--signature", "the signature file must name an algebra");
      auto thy = io::load_theory(theory, sig);
      Budget budget = common.make_budget();
      ConsequenceBounds b{depth, variables ? variables : 2, max_domain};
      auto r = universal_consequences_bounded(thy, sig, sig.truth_chain(), b, budget);
      Json list = Json::array();
      std::string text;
      for (const auto& f : r.sentences) {
        list.push_back(render_formula(f));
        text += render_formula(f) + "\n";
      }
      if (!text.empty()) text.pop_back();
      return finish({{"command", "universal-consequences"},
                     {"bounds", {{"depth", b.depth}, {"variables", b.variables},
                                 {"max_domain", b.max_domain}}},
                     {"models", r.models},
                     {"candidates", r.candidates},
                     {"sentences", list}},
                    text, true);
    };
  });

  auto* counterexample = app.add_subcommand(
      "counterexample", "A class closed under substructures without a universal axiomatization");
  counterexample->add_option("--m-value", m_value);
  counterexample->add_option("--n-value", n_value);
  counterexample->add_option("--threshold", threshold);
  counterexample->callback([&] {
    run = [&] {
      auto r = reproduce_counterexample(m_value, n_value, threshold);
      Json j = tagged("counterexample", cli::counterexample_json(r));
      std::string text = "forall x. P(x): " + r.forall_in_m + " in M, " + r.forall_in_n +
                         " in N\nequivalent over {P} to depth 2: " +
                         yes_no(r.base_equivalent) + "\n" + r.sentence + ": " +
                         r.sentence_in_m + " in M, " + r.sentence_in_n + " in N\n" +
                         "holds in all " + std::to_string(r.substructures) +
                         " substructures of M: " + yes_no(r.substructures_satisfy) +
                         "\npassed: " + yes_no(r.passed);
      return finish(j, text, r.passed);
    };
  });

  auto* verify = app.add_subcommand("verify", "Run a randomized preservation suite");
  verify->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"los-tarski-lemma", "los-tarski-control", "union-lemma"}));
  verify->add_option("--instances", instances)->check(CLI::PositiveNumber);
  verify->add_option("--max-chain-size", max_chain_size)->check(CLI::Range(2, 6));
  verify->add_option("--max-domain", max_domain)->check(CLI::PositiveNumber);
  verify->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  verify->add_option("--variables", variables)->check(CLI::NonNegativeNumber);
  verify->add_flag("--no-truth-constants", no_truth);
  verify->callback([&] {
    run = [&] {
      SuiteOptions o;
      o.seed = common.seed;
      o.instances = instances;
      o.jobs = common.jobs;
      o.max_chain_size = max_chain_size;
      o.max_domain = verify->count("--max-domain") ? max_domain : 4;
      o.bounds = {depth, variables ? variables : 2, !no_truth};
      o.budget_per_instance = common.make_budget().limit();
      PreservationReport r;
      bool expect_violations = suite == "los-tarski-control";
      if (suite == "union-lemma") r = run_union_suite(o, PrenexClass::forall_n(2));
      else r = run_substructure_suite(o, expect_violations ? PrenexClass::exists_n(1)
                                                           : PrenexClass::forall_n(1));
      if (expect_violations) r.claim = "los-tarski-control";
      bool passed = expect_violations ? r.violation_count > 0 : r.ok();
      Json j = tagged("verify", cli::preservation_json(r));
      j["expected_violations"] = expect_violations;
      j["passed"] = passed;
      std::string text = r.claim + ": " + std::to_string(r.instances) + " instances, " +
                         std::to_string(r.sentences_checked) + " sentences, " +
                         std::to_string(r.violation_count) + " violations";
      for (const auto& v : r.violations)
        text += "\n  instance " + std::to_string(v.instance) + ": " + v.formula +
                " holds in " + v.whole + " but is " + v.part_value + " in " + v.part;
      text += "\npassed: " + yes_no(passed);
      return finish(j, text, passed);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Outcome out;
  try {
    out = run();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::string body = common.format == "json" ? out.report.dump(2) : out.text;
  body += "\n";
  if (common.output.empty()) std::cout << body;
  else io::write_text(common.output, body);
  return out.code;
}
