#include "gradedmt/preservation.hh"

#include <algorithm>
#include <set>

#include "gradedmt/corpus.hh"
#include "gradedmt/error.hh"
#include "gradedmt/generator.hh"
#include "gradedmt/parallel.hh"
#include "gradedmt/parser.hh"
#include "gradedmt/samples.hh"
#include "gradedmt/semantics.hh"

namespace gradedmt {

namespace {

std::string domain_text(const Structure& s) {
  std::string out = "{";
  for (int i = 0; i < s.size(); ++i) out += (i ? "," : "") + s.label(i);
  return out + "}";
}

GeneratorOptions options_for(const GenerationBounds& b) {
  GeneratorOptions opt;
  opt.depth = b.depth;
  opt.variables = b.variables;
  return opt;
}

std::map<std::string, std::int64_t> bounds_map(const SuiteOptions& o) {
  return {{"depth", o.bounds.depth},
          {"variables", o.bounds.variables},
          {"truth_constants", o.bounds.truth_constants ? 1 : 0},
          {"max_chain_size", o.max_chain_size},
          {"max_domain", o.max_domain}};
}

struct InstanceOutcome {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::optional<PreservationViolation> first;
};

PreservationReport merge(std::string claim, const SuiteOptions& o,
                         std::vector<InstanceOutcome>& outcomes) {
  PreservationReport r;
  r.claim = std::move(claim);
  r.seed = o.seed;
  r.instances = outcomes.size();
  r.bounds = bounds_map(o);
  for (auto& x : outcomes) {
    r.sentences_checked += x.checked;
    r.violation_count += x.violations;
    if (x.first) r.violations.push_back(std::move(*x.first));
  }
  return r;
}

}  // namespace

Signature generation_signature(const Structure& s, bool truth_constants) {
  Signature sig = s.signature();
  return truth_constants ? expand_with_truth_constants(sig, s.chain_ptr()) : sig;
}

ImpliesReport implies_exists_n(const Structure& left, const Structure& right,
                               const std::vector<std::string>& generators, int n,
                               GenerationBounds bounds, Budget& budget) {
  if (!(left.chain() == right.chain()))
    throw PreconditionError("both structures must use the same chain");
  if (!(left.signature() == right.signature()))
    throw SignatureError("both structures must interpret the same symbols");
  if (n < 1) throw PreconditionError("n must be >= 1");
  ImpliesReport out;
  out.n = n;
  out.bounds = bounds;
  GeneratorOptions opt = options_for(bounds);
  World l{&left, {}}, r{&right, {}};
  for (const auto& label : generators) {
    auto li = left.find(label), ri = right.find(label);
    if (!li || !ri)
      throw PreconditionError("generator '" + label + "' is not in both domains");
    l.params.push_back(*li);
    r.params.push_back(*ri);
    opt.param_names.push_back(domain_constant_name(label));
  }
  const Elem top = left.chain().top();
  enumerate_prenex({l, r}, generation_signature(left, bounds.truth_constants), opt,
                   PrenexClass::exists_n(n), budget, [&](const PrenexSentence& p) {
                     if (p.values[0] != top || p.values[1] == top) return true;
                     out.holds = false;
                     out.separating = p.formula;
                     out.left_value = p.values[0];
                     out.right_value = p.values[1];
                     return false;
                   });
  return out;
}

PreservationReport check_preserved_under_substructures(
    std::span<const Formula> sentences, std::span<const Structure> corpus) {
  PreservationReport r;
  r.claim = "preserved-under-substructures";
  r.instances = corpus.size();
  for (const auto& f : sentences)
    if (!is_sentence(f)) throw EvalError("'" + render_formula(f) + "' is not a sentence");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Structure& t = corpus[i];
    std::vector<bool> holds;
    for (const auto& f : sentences) holds.push_back(satisfies(f, t, Assignment{}));
    bool recorded = false;
    enumerate_substructures(t, [&](const Structure& s) {
      for (std::size_t j = 0; j < sentences.size(); ++j) {
        ++r.sentences_checked;
        if (!holds[j]) continue;
        Elem v = eval_formula(sentences[j], s);
        if (v == s.chain().top()) continue;
        ++r.violation_count;
        if (!recorded) {
          r.violations.push_back({i, render_formula(sentences[j]), domain_text(t),
                                  domain_text(s), s.chain().label(v)});
          recorded = true;
        }
      }
      return true;
    });
  }
  return r;
}

PreservationReport check_preserved_under_unions(
    std::span<const Formula> sentences, std::span<const StructureChain> chains) {
  PreservationReport r;
  r.claim = "preserved-under-unions";
  r.instances = chains.size();
  for (const auto& f : sentences)
    if (!is_sentence(f)) throw EvalError("'" + render_formula(f) + "' is not a sentence");
  for (std::size_t i = 0; i < chains.size(); ++i) {
    Structure u = union_of_chain(chains[i]);
    bool recorded = false;
    for (const auto& f : sentences) {
      ++r.sentences_checked;
      bool all = true;
      for (const auto& m : chains[i].members) all = all && satisfies(f, m, Assignment{});
      if (!all) continue;
      Elem v = eval_formula(f, u);
      if (v == u.chain().top()) continue;
      ++r.violation_count;
      if (!recorded) {
        r.violations.push_back({i, render_formula(f), "every member", domain_text(u),
                                u.chain().label(v)});
        recorded = true;
      }
    }
  }
  return r;
}

PreservationReport run_substructure_suite(const SuiteOptions& options,
                                          PrenexClass bound) {
  std::vector<InstanceOutcome> outcomes(options.instances);
  parallel_for(options.instances, options.jobs, [&](std::size_t i) {
    Rng rng = instance_rng(options.seed, i);
    const int k = 2 + static_cast<int>(rng() % (options.max_chain_size - 1));
    const int n = 1 + static_cast<int>(rng() % options.max_domain);
    ChainPtr chain = random_mtl_chain(k, rng);
    Structure t = random_structure(suite_signature(), chain, samples::numbered("e", n), rng);
    std::vector<Structure> subs;
    enumerate_substructures(t, [&](const Structure& s) {
      subs.push_back(s);
      return true;
    });
    std::vector<World> worlds{{&t, {}}};
    for (const auto& s : subs) worlds.push_back({&s, {}});

    Budget budget(options.budget_per_instance);
    InstanceOutcome& out = outcomes[i];
    const Elem top = chain->top();
    enumerate_prenex(worlds, generation_signature(t, options.bounds.truth_constants),
                     options_for(options.bounds), bound, budget,
                     [&](const PrenexSentence& p) {
                       ++out.checked;
                       if (p.values[0] != top) return true;
                       for (std::size_t w = 1; w < p.values.size(); ++w) {
                         if (p.values[w] == top) continue;
                         ++out.violations;
                         if (!out.first)
                           out.first = PreservationViolation{
                               i, render_formula(p.formula), domain_text(t),
                               domain_text(subs[w - 1]), chain->label(p.values[w])};
                         break;
                       }
                       return true;
                     });
  });
  std::string claim = bound == PrenexClass::forall_n(1) ? "los-tarski-lemma"
                                                        : "substructures-" + bound.to_string();
  return merge(claim, options, outcomes);
}

PreservationReport run_union_suite(const SuiteOptions& options, PrenexClass bound) {
  std::vector<InstanceOutcome> outcomes(options.instances);
  parallel_for(options.instances, options.jobs, [&](std::size_t i) {
    Rng rng = instance_rng(options.seed, i);
    const int k = 2 + static_cast<int>(rng() % (options.max_chain_size - 1));
    ChainPtr chain = random_mtl_chain(k, rng);
    const int start = 1 + static_cast<int>(rng() % std::max(1, options.max_domain - 2));
    std::vector<Structure> members{
        random_structure(suite_signature(), chain, samples::numbered("e", start), rng)};
    for (int step = 1; step < 3; ++step) {
      const Structure& last = members.back();
      members.push_back(
          random_extension(last, {"e" + std::to_string(last.size())}, rng));
    }
    StructureChain c = validate_chain_of_structures(members);
    if (!c.is_chain) throw ValidationError("generated chain is invalid: " + c.reason);
    Structure u = union_of_chain(c);

    Budget budget(options.budget_per_instance);
    InstanceOutcome& out = outcomes[i];
    auto tv = check_tarski_vaught(c, std::max(options.bounds.depth, 1), budget);
    if (!tv.quantifier_free_ok) {
      ++out.violations;
      out.first = PreservationViolation{i, render_formula(*tv.formula),
                                        domain_text(c.members[*tv.member]), domain_text(u),
                                        "quantifier-free value changed"};
    }

    std::vector<World> worlds;
    for (const auto& m : c.members) worlds.push_back({&m, {}});
    worlds.push_back({&u, {}});
    const Elem top = chain->top();
    enumerate_prenex(worlds, generation_signature(u, options.bounds.truth_constants),
                     options_for(options.bounds), bound, budget,
                     [&](const PrenexSentence& p) {
                       ++out.checked;
                       for (std::size_t w = 0; w + 1 < p.values.size(); ++w)
                         if (p.values[w] != top) return true;
                       if (p.values.back() == top) return true;
                       ++out.violations;
                       if (!out.first)
                         out.first = PreservationViolation{i, render_formula(p.formula),
                                                           "every member", domain_text(u),
                                                           chain->label(p.values.back())};
                       return true;
                     });
  });
  std::string claim = bound == PrenexClass::forall_n(2) ? "union-lemma"
                                                        : "unions-" + bound.to_string();
  return merge(claim, options, outcomes);
}

const char* amalgam_status_name(AmalgamStatus s) {
  switch (s) {
    case AmalgamStatus::Found: return "found";
    case AmalgamStatus::PreconditionFailed: return "precondition-failed";
    case AmalgamStatus::NoneWithinBounds: return "none-within-bounds";
  }
  return "?";
}

void validate_amalgam_instance(const AmalgamInstance& inst) {
  if (!(inst.left.chain() == inst.right.chain()))
    throw PreconditionError("left and right must use the same chain");
  if (!inst.common) {
    if (!inst.generators.empty())
      throw PreconditionError("generators need a common part");
    return;
  }
  const Structure& c = *inst.common;
  if (auto r = is_substructure(c, inst.left); !r.ok)
    throw PreconditionError("common part is not a substructure of left: " + r.detail);
  if (auto r = is_substructure(c, inst.right); !r.ok)
    throw PreconditionError("common part is not a substructure of right: " + r.detail);
  // Closure of the generators under the functions must be the whole domain.
  std::set<int> gen;
  for (const auto& l : inst.generators) gen.insert(c.index_of(l));
  for (const auto& [name, table] : c.functions())
    if (table.arity == 0) gen.insert(table.values[0]);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(gen.begin(), gen.end());
    for (const auto& [name, table] : c.functions()) {
      TupleCounter d(table.arity, static_cast<int>(cur.size()));
      if (cur.empty()) break;
      do {
        std::vector<int> args;
        for (int x : d.current()) args.push_back(cur[x]);
        grew |= gen.insert(c.function_value(name, args)).second;
      } while (d.next());
    }
  }
  if (static_cast<int>(gen.size()) != c.size())
    throw PreconditionError("generators do not generate the common part");
}

namespace {

// Every generated Forall(1) sentence with parameters for all left elements
// that holds in `left` holds in `n` with the parameters moved by g.
bool preserves_forall1(const Structure& left, const Structure& n,
                       const std::vector<int>& g, const AmalgamOptions& o,
                       Budget& budget) {
  GeneratorOptions opt = options_for(o.generation);
  World l{&left, {}}, r{&n, g};
  for (int i = 0; i < left.size(); ++i) {
    l.params.push_back(i);
    opt.param_names.push_back(domain_constant_name(left.label(i)));
  }
  bool ok = true;
  const Elem top = left.chain().top();
  enumerate_prenex({l, r}, generation_signature(left, o.truth_constants), opt,
                   PrenexClass::forall_n(1), budget, [&](const PrenexSentence& p) {
                     ok = !(p.values[0] == top && p.values[1] != top);
                     return ok;
                   });
  return ok;
}

std::vector<int> common_images(const AmalgamInstance& inst) {
  std::vector<int> fixed(inst.left.size(), -1);
  if (inst.common)
    for (const auto& l : inst.common->domain())
      fixed[inst.left.index_of(l)] = inst.right.index_of(l);
  return fixed;
}

int vars_for(const AmalgamOptions& o) {
  return o.variables > 0 ? o.variables : std::max(o.depth, 1);
}

}  // namespace

AmalgamResult search_amalgam(const AmalgamInstance& inst, const AmalgamOptions& options,
                             Budget& budget) {
  validate_amalgam_instance(inst);
  if (options.n != 1 && options.n != 2) throw PreconditionError("n must be 1 or 2");
  AmalgamResult out;
  try {
    out.precondition = implies_exists_n(inst.left, inst.right, inst.generators, options.n,
                                        options.generation, budget);
  } catch (const BudgetError&) {
    out.budget_exhausted = true;
    return out;
  }
  if (!out.precondition.holds) {
    out.status = AmalgamStatus::PreconditionFailed;
    return out;
  }

  const Structure& right = inst.right;
  const int base = right.size();
  const int k = right.chain().size();
  const Signature esig = generation_signature(right, options.truth_constants);
  const std::vector<int> fixed = common_images(inst);

  std::set<std::string> taken(right.domain().begin(), right.domain().end());
  taken.insert(inst.left.domain().begin(), inst.left.domain().end());
  std::vector<std::string> fresh;
  for (int j = 1; static_cast<int>(fresh.size()) < options.max_size - base; ++j)
    if (!taken.contains("n" + std::to_string(j))) fresh.push_back("n" + std::to_string(j));

  try {
    for (int m = 0; base + m <= options.max_size; ++m) {
      std::vector<std::string> dom = right.domain();
      dom.insert(dom.end(), fresh.begin(), fresh.begin() + m);
      const int size = base + m;

      struct Cell {
        bool predicate;
        std::string name;
        std::size_t index;
      };
      std::vector<Cell> cells;
      std::vector<int> bases;
      auto has_fresh = [&](std::size_t idx, int arity) {
        for (int a = 0; a < arity; ++a, idx /= size)
          if (static_cast<int>(idx % size) >= base) return true;
        return false;
      };
      auto cells_for = [&](int arity) {
        std::size_t total = 1;
        for (int a = 0; a < arity; ++a) total *= size;
        return total;
      };
      for (const auto& [name, t] : right.predicates())
        for (std::size_t i = 0; i < cells_for(t.arity); ++i)
          if (has_fresh(i, t.arity)) {
            cells.push_back({true, name, i});
            bases.push_back(k);
          }
      for (const auto& [name, t] : right.functions())
        for (std::size_t i = 0; i < cells_for(t.arity); ++i)
          if (has_fresh(i, t.arity)) {
            cells.push_back({false, name, i});
            bases.push_back(size);
          }

      std::vector<int> digits(cells.size(), 0);
      while (true) {
        budget.charge(1, "amalgam candidates");
        ++out.candidates;
        Structure n(right.chain_ptr(), dom);
        std::map<std::string, PredicateTable> preds;
        std::map<std::string, FunctionTable> funcs;
        for (const auto& [name, t] : right.predicates()) {
          PredicateTable pt{t.arity, std::vector<Elem>(cells_for(t.arity), 0)};
          TupleCounter d(t.arity, base);
          do {
            std::vector<int> a = d.current();
            pt.values[table_index(a, size)] = right.predicate_value(name, a);
          } while (d.next());
          preds[name] = std::move(pt);
        }
        for (const auto& [name, t] : right.functions()) {
          FunctionTable ft{t.arity, std::vector<int>(cells_for(t.arity), 0)};
          TupleCounter d(t.arity, base);
          do {
            std::vector<int> a = d.current();
            ft.values[table_index(a, size)] = right.function_value(name, a);
          } while (d.next());
          funcs[name] = std::move(ft);
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (cells[c].predicate) preds[cells[c].name].values[cells[c].index] = digits[c];
          else funcs[cells[c].name].values[cells[c].index] = digits[c];
        }
        for (auto& [name, t] : preds) n.set_predicate(name, std::move(t));
        for (auto& [name, t] : funcs) n.set_function(name, std::move(t));

        StructureMap inc = inclusion_map(right, n);
        if (is_elementary_up_to_depth(inc, right, n, options.depth, esig, budget,
                                      vars_for(options)).ok) {
          std::optional<StructureMap> left_map;
          MapSearch search{true, true, fixed};
          for_each_strong_map(inst.left, n, search, budget, [&](const StructureMap& g) {
            if (options.disjoint)
              for (int i = 0; i < inst.left.size(); ++i)
                if (fixed[i] < 0 && g.g[i] < base) return true;
            if (options.n == 2 && !preserves_forall1(inst.left, n, g.g, options, budget))
              return true;
            left_map = g;
            return false;
          });
          if (left_map) {
            out.status = AmalgamStatus::Found;
            out.amalgam = n;
            out.left_map = std::move(left_map);
            out.right_map = inc;
            out.right_map->claim = MapKind::Elementary;
            out.right_map->depth = options.depth;
            return out;
          }
        }

        std::size_t pos = cells.size();
        bool done = cells.empty();
        while (!done) {
          --pos;
          if (++digits[pos] < bases[pos]) break;
          digits[pos] = 0;
          if (pos == 0) done = true;
        }
        if (done) break;
      }
    }
  } catch (const BudgetError&) {
    out.budget_exhausted = true;
  }
  out.status = AmalgamStatus::NoneWithinBounds;
  return out;
}

AmalgamVerification verify_amalgam(const AmalgamInstance& inst,
                                   const AmalgamResult& result,
                                   const AmalgamOptions& options, Budget& budget) {
  AmalgamVerification v;
  if (result.status != AmalgamStatus::Found || !result.amalgam || !result.left_map) {
    v.detail = "no amalgam to verify";
    return v;
  }
  const Structure& n = *result.amalgam;
  auto emb = is_embedding(*result.left_map, inst.left, n);
  v.left_embedding = emb.ok;
  if (!emb.ok) v.detail += "left: " + emb.counterexample + "; ";
  if (inst.common)
    for (const auto& l : inst.common->domain())
      if (n.label(result.left_map->g[inst.left.index_of(l)]) != l) {
        v.left_embedding = false;
        v.detail += "left map moves common element " + l + "; ";
      }
  auto sub = is_substructure(inst.right, n);
  v.right_substructure = sub.ok;
  if (!sub.ok) v.detail += "right: " + sub.detail + "; ";
  auto el = is_elementary_up_to_depth(inclusion_map(inst.right, n), inst.right, n,
                                      options.depth,
                                      generation_signature(inst.right, options.truth_constants),
                                      budget, vars_for(options));
  v.right_elementary = el.ok;
  if (!el.ok && el.separating)
    v.detail += "right not elementary: " + render_formula(*el.separating) + "; ";
  if (options.n == 2) {
    v.left_forall1 = preserves_forall1(inst.left, n, result.left_map->g, options, budget);
    if (!v.left_forall1) v.detail += "left map loses a Forall(1) formula; ";
  }
  return v;
}

UniversalConsequences universal_consequences_bounded(std::span<const Formula> theory,
                                                     const Signature& sig,
                                                     const ChainPtr& chain,
                                                     ConsequenceBounds bounds,
                                                     Budget& budget) {
  for (const auto& f : theory) {
    check_formula(f, sig);
    if (!is_sentence(f)) throw EvalError("'" + render_formula(f) + "' is not a sentence");
  }
  UniversalConsequences out;
  std::vector<Structure> models;
  for (int n = 1; n <= bounds.max_domain; ++n)
    for_each_structure(sig, chain, n, budget, [&](const Structure& s) {
      if (is_model(theory, s).ok) models.push_back(s);
      return true;
    });
  out.models = models.size();

  std::vector<Formula> explicit_members;
  for (const auto& f : theory)
    if (fits_within(classify_prenex(f), PrenexClass::forall_n(1))) {
      out.sentences.push_back(f);
      explicit_members.push_back(f);
    }

  std::vector<World> worlds;
  for (const auto& m : models) worlds.push_back({&m, {}});
  GeneratorOptions opt;
  opt.depth = bounds.depth;
  opt.variables = bounds.variables;
  opt.semantic_dedup = false;
  const Elem top = chain->top();
  enumerate_prenex(worlds, sig, opt, PrenexClass::forall_n(1), budget,
                   [&](const PrenexSentence& p) {
                     ++out.candidates;
                     for (Elem v : p.values)
                       if (v != top) return true;
                     for (const auto& e : explicit_members)
                       if (e == p.formula) return true;
                     out.sentences.push_back(p.formula);
                     return true;
                   });
  return out;
}

ValueAgreement find_value_agreeing_universal(const Formula& phi,
                                             std::span<const Structure> corpus,
                                             GenerationBounds bounds, Budget& budget) {
  if (corpus.empty()) throw PreconditionError("the corpus is empty");
  if (!is_sentence(phi)) throw EvalError("'" + render_formula(phi) + "' is not a sentence");
  std::vector<Elem> target;
  std::vector<World> worlds;
  for (const auto& s : corpus) {
    if (!(s.chain() == corpus[0].chain()))
      throw PreconditionError("corpus structures must share one chain");
    target.push_back(eval_formula(phi, s));
    worlds.push_back({&s, {}});
  }
  ValueAgreement out;
  enumerate_prenex(worlds, generation_signature(corpus[0], bounds.truth_constants),
                   options_for(bounds), PrenexClass::forall_n(1), budget,
                   [&](const PrenexSentence& p) {
                     ++out.candidates;
                     if (!std::equal(target.begin(), target.end(), p.values.begin()))
                       return true;
                     out.universal = p.formula;
                     return false;
                   });
  return out;
}

CounterexampleReport reproduce_counterexample(const std::string& m_value,
                                              const std::string& n_value,
                                              const std::string& threshold) {
  CounterexampleReport r;
  r.m_value = m_value;
  r.n_value = n_value;
  r.threshold = threshold;
  auto g = std::make_shared<const FiniteChain>(chains::godel4());
  auto elem = [&](const std::string& l) {
    auto e = g->find(l);
    if (!e) throw PreconditionError("'" + l + "' is not an element of the Goedel 4-chain");
    return *e;
  };
  std::vector<std::string> dom{"0", "1", "2"};
  Structure m = samples::constant_predicate(g, dom, "P", elem(m_value));
  Structure n = samples::constant_predicate(g, dom, "P", elem(n_value));

  Signature base;
  base.add_predicate("P", 1);
  Formula all = parse_formula("forall x. P(x)", base);
  r.forall_in_m = g->label(eval_formula(all, m));
  r.forall_in_n = g->label(eval_formula(all, n));

  Budget budget = Budget::from_env();
  auto eq = equiv_up_to_depth(m, n, r.depth, base, budget);
  r.base_equivalent = eq.equivalent;
  r.base_separator = eq.separating;

  Signature expanded = expand_with_truth_constants(base, g);
  Formula sentence = parse_formula("val(" + threshold + ") -> forall x. P(x)", expanded);
  r.sentence = render_formula(sentence);
  r.sentence_in_m = g->label(eval_formula(sentence, m));
  r.sentence_in_n = g->label(eval_formula(sentence, n));

  r.substructures_satisfy = true;
  enumerate_substructures(m, [&](const Structure& s) {
    ++r.substructures;
    r.substructures_satisfy = r.substructures_satisfy && satisfies(sentence, s, Assignment{});
    return true;
  });
  r.passed = r.forall_in_m == m_value && r.forall_in_n == n_value && r.base_equivalent &&
             r.sentence_in_m == "1" && r.sentence_in_n != "1" && r.substructures_satisfy;
  return r;
}

}  // namespace gradedmt
