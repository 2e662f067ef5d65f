#include "gradedmt/morphisms.hh"

#include <algorithm>
#include <numeric>
#include <set>

#include "gradedmt/error.hh"
#include "gradedmt/generator.hh"
#include "gradedmt/parser.hh"

namespace gradedmt {

namespace {

bool same_chain(const Structure& a, const FiniteChain& c) {
  return &a.chain() == &c || a.chain() == c;
}

std::string tuple_text(const Structure& s, std::span<const int> d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out += ",";
    out += s.label(d[i]);
  }
  return out;
}

void require_same_language(const Structure& s, const Structure& t) {
  if (!(s.signature() == t.signature()))
    throw SignatureError("structures interpret different symbols");
}

void require_fit(const StructureMap& m, const Structure& s, const Structure& t) {
  if (!m.f.source || !m.f.target || !same_chain(s, *m.f.source) ||
      !same_chain(t, *m.f.target))
    throw FormatError("algebra map does not connect the structures' chains");
  if (static_cast<int>(m.g.size()) != s.size())
    throw FormatError("domain map must have one entry per source element");
  for (int x : m.g)
    if (x < 0 || x >= t.size()) throw FormatError("domain map leaves the target");
}

bool injective(const std::vector<int>& g) {
  return std::set<int>(g.begin(), g.end()).size() == g.size();
}

// First tuple over `n` elements, of the given arity, on which pred fails.
template <class Pred>
std::optional<std::vector<int>> first_failure(int n, int arity, Pred&& pred) {
  TupleCounter d(arity, n);
  do {
    if (!pred(d.current())) return d.current();
  } while (d.next());
  return std::nullopt;
}

}  // namespace

const char* map_kind_name(MapKind k) {
  switch (k) {
    case MapKind::Strong: return "strong";
    case MapKind::Embedding: return "embedding";
    case MapKind::Elementary: return "elementary";
  }
  return "?";
}

StructureMap identity_map(const Structure& s) {
  std::vector<int> g(s.size());
  std::iota(g.begin(), g.end(), 0);
  return {AlgebraMap::identity(s.chain_ptr()), std::move(g), MapKind::Embedding, 0};
}

StructureMap compose(const StructureMap& first, const StructureMap& second) {
  StructureMap out;
  out.f.source = first.f.source;
  out.f.target = second.f.target;
  for (Elem e : first.f.map) out.f.map.push_back(second.f.map.at(e));
  for (int d : first.g) out.g.push_back(second.g.at(d));
  return out;
}

CheckResult is_strong_homomorphism(const StructureMap& m, const Structure& s,
                                   const Structure& t) {
  require_same_language(s, t);
  require_fit(m, s, t);
  if (auto alg = is_algebra_homomorphism(m.f); !alg)
    return CheckResult::fail("f is not an algebra homomorphism: " +
                             alg.counterexample);
  for (const auto& [name, table] : s.functions()) {
    auto bad = first_failure(s.size(), table.arity, [&](const std::vector<int>& d) {
      std::vector<int> gd;
      for (int x : d) gd.push_back(m.g[x]);
      return m.g[s.function_value(name, d)] == t.function_value(name, gd);
    });
    if (bad)
      return CheckResult::fail("g does not commute with " + name + " at (" +
                               tuple_text(s, *bad) + ")");
  }
  for (const auto& [name, table] : s.predicates()) {
    auto bad = first_failure(s.size(), table.arity, [&](const std::vector<int>& d) {
      std::vector<int> gd;
      for (int x : d) gd.push_back(m.g[x]);
      return m.f.map[s.predicate_value(name, d)] == t.predicate_value(name, gd);
    });
    if (bad) {
      std::vector<int> gd;
      for (int x : *bad) gd.push_back(m.g[x]);
      Elem v = s.predicate_value(name, *bad);
      return CheckResult::fail(
          name + "(" + tuple_text(s, *bad) + "): f(" + s.chain().label(v) + ") = " +
          t.chain().label(m.f.map[v]) + " but " + name + "(" + tuple_text(t, gd) +
          ") = " + t.chain().label(t.predicate_value(name, gd)));
    }
  }
  return {};
}

CheckResult is_embedding(const StructureMap& m, const Structure& s,
                         const Structure& t) {
  auto strong = is_strong_homomorphism(m, s, t);
  if (!strong) return strong;
  if (!m.f.injective()) return CheckResult::fail("f is not injective");
  if (!injective(m.g)) return CheckResult::fail("g is not injective");
  return {};
}

CheckResult is_isomorphism(const StructureMap& m, const Structure& s,
                           const Structure& t) {
  auto emb = is_embedding(m, s, t);
  if (!emb) return emb;
  if (m.f.map.size() != static_cast<std::size_t>(t.chain().size()))
    return CheckResult::fail("f is not surjective");
  if (s.size() != t.size()) return CheckResult::fail("g is not surjective");
  return {};
}

ElementaryReport is_elementary_up_to_depth(const StructureMap& m,
                                           const Structure& s,
                                           const Structure& t, int depth,
                                           const Signature& sig, Budget& budget,
                                           int variables) {
  ElementaryReport out;
  out.depth = depth;
  out.variables = variables > 0 ? variables : std::max(depth, 1);
  if (auto strong = is_strong_homomorphism(m, s, t); !strong) {
    out.ok = false;
    out.reason = strong.counterexample;
    return out;
  }
  GeneratorOptions opt;
  opt.depth = depth;
  opt.variables = out.variables;
  std::vector<World> worlds{{&s, {}}, {&t, {}}};
  FormulaEnumerator gen(worlds, sig, opt, budget);
  const TableLayout& layout = gen.layout();

  // Target table position of g applied to each source assignment.
  std::vector<std::size_t> target_index(layout.size(0));
  std::vector<int> a(out.variables), ga(out.variables);
  for (std::size_t i = 0; i < layout.size(0); ++i) {
    std::size_t rest = i;
    for (int v = 0; v < out.variables; ++v) {
      a[v] = static_cast<int>(rest % s.size());
      rest /= s.size();
      ga[v] = m.g[a[v]];
    }
    target_index[i] = layout.index(1, ga);
  }

  gen.run([&](const FormulaClass& c) {
    for (std::size_t i = 0; i < layout.size(0); ++i) {
      Elem x = m.f.map[c.values[i]];
      Elem y = c.values[target_index[i]];
      if (x == y) continue;
      out.ok = false;
      out.separating = c.formula;
      std::size_t rest = i;
      for (int v = 0; v < out.variables; ++v) {
        out.tuple.push_back(static_cast<int>(rest % s.size()));
        rest /= s.size();
      }
      out.source_value = x;
      out.target_value = y;
      return false;
    }
    return true;
  });
  return out;
}

SubstructureReport is_substructure(const Structure& s, const Structure& t) {
  const FiniteChain& a = s.chain();
  const FiniteChain& b = t.chain();
  if (!same_chain(s, b)) {
    AlgebraMap inc{s.chain_ptr(), t.chain_ptr(), {}};
    for (int e = 0; e < a.size(); ++e) {
      auto j = b.find(a.label(e));
      if (!j || (e > 0 && *j <= inc.map.back()))
        return {false, 1, "chain element '" + a.label(e) + "' is not in order in the larger chain"};
      inc.map.push_back(*j);
    }
    if (auto h = is_algebra_homomorphism(inc); !h)
      return {false, 1, "not a subalgebra: " + h.counterexample};
  }
  std::vector<int> at;
  for (const auto& l : s.domain()) {
    auto j = t.find(l);
    if (!j) return {false, 2, "element '" + l + "' is not in the larger domain"};
    at.push_back(*j);
  }
  auto mapped = [&](const std::vector<int>& d) {
    std::vector<int> out;
    for (int x : d) out.push_back(at[x]);
    return out;
  };
  if (s.functions().size() != t.functions().size())
    return {false, 3, "different function symbols"};
  for (const auto& [name, table] : s.functions()) {
    const FunctionTable* tt = t.function(name);
    if (!tt || tt->arity != table.arity)
      return {false, 3, "function '" + name + "' is not shared"};
    auto bad = first_failure(s.size(), table.arity, [&](const std::vector<int>& d) {
      return at[s.function_value(name, d)] == t.function_value(name, mapped(d));
    });
    if (bad) return {false, 3, name + "(" + tuple_text(s, *bad) + ") differs"};
  }
  if (s.predicates().size() != t.predicates().size())
    return {false, 4, "different predicate symbols"};
  for (const auto& [name, table] : s.predicates()) {
    const PredicateTable* tt = t.predicate(name);
    if (!tt || tt->arity != table.arity)
      return {false, 4, "predicate '" + name + "' is not shared"};
    auto bad = first_failure(s.size(), table.arity, [&](const std::vector<int>& d) {
      return a.label(s.predicate_value(name, d)) ==
             b.label(t.predicate_value(name, mapped(d)));
    });
    if (bad) return {false, 4, name + "(" + tuple_text(s, *bad) + ") differs"};
  }
  return {};
}

Structure induced_substructure(const Structure& t, const std::vector<int>& elements) {
  std::vector<int> pos(t.size(), -1);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    pos.at(elements[i]) = static_cast<int>(i);
    labels.push_back(t.label(elements[i]));
  }
  Structure s(t.chain_ptr(), labels);
  const int n = s.size();
  for (const auto& [name, table] : t.functions()) {
    FunctionTable ft{table.arity, {}};
    TupleCounter d(table.arity, n);
    do {
      std::vector<int> td;
      for (int x : d.current()) td.push_back(elements[x]);
      int r = pos[t.function_value(name, td)];
      if (r < 0)
        throw PreconditionError("element set is not closed under '" + name + "'");
      ft.values.push_back(r);
    } while (d.next());
    s.set_function(name, std::move(ft));
  }
  for (const auto& [name, table] : t.predicates()) {
    PredicateTable pt{table.arity, {}};
    TupleCounter d(table.arity, n);
    do {
      std::vector<int> td;
      for (int x : d.current()) td.push_back(elements[x]);
      pt.values.push_back(t.predicate_value(name, td));
    } while (d.next());
    s.set_predicate(name, std::move(pt));
  }
  return s;
}

StructureMap inclusion_map(const Structure& s, const Structure& t) {
  StructureMap m;
  m.claim = MapKind::Embedding;
  m.f.source = s.chain_ptr();
  m.f.target = t.chain_ptr();
  for (int e = 0; e < s.chain().size(); ++e) {
    auto j = t.chain().find(s.chain().label(e));
    if (!j) throw PreconditionError("chain element '" + s.chain().label(e) + "' is missing");
    m.f.map.push_back(*j);
  }
  for (const auto& l : s.domain()) m.g.push_back(t.index_of(l));
  return m;
}

namespace {

bool closed_subset(const Structure& t, const std::vector<int>& elems,
                   const std::vector<bool>& in) {
  for (const auto& [name, table] : t.functions()) {
    TupleCounter d(table.arity, static_cast<int>(elems.size()));
    do {
      std::vector<int> td;
      for (int x : d.current()) td.push_back(elems[x]);
      if (!in[t.function_value(name, td)]) return false;
    } while (d.next());
  }
  return true;
}

// Same structure over the subalgebra `sub` of its chain.
Structure over_subalgebra(const Structure& s, const std::vector<Elem>& sub) {
  auto chain = std::make_shared<const FiniteChain>(restrict_chain(s.chain(), sub));
  Structure out(chain, s.domain());
  for (const auto& [name, table] : s.functions()) out.set_function(name, table);
  for (const auto& [name, table] : s.predicates()) {
    PredicateTable pt = table;
    for (auto& v : pt.values)
      v = static_cast<Elem>(std::lower_bound(sub.begin(), sub.end(), v) - sub.begin());
    out.set_predicate(name, std::move(pt));
  }
  return out;
}

}  // namespace

bool enumerate_substructures(const Structure& t,
                             const std::function<bool(const Structure&)>& visit,
                             bool with_subalgebras) {
  const int n = t.size();
  if (n > 20) throw PreconditionError("domain too large for subset enumeration");
  const int k = t.chain().size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> elems;
    std::vector<bool> in(n, false);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        elems.push_back(i);
        in[i] = true;
      }
    if (!closed_subset(t, elems, in)) continue;
    Structure s = induced_substructure(t, elems);
    if (!visit(s)) return false;
    if (!with_subalgebras) continue;

    std::vector<bool> used(k, false);
    for (const auto& [name, table] : s.predicates())
      for (Elem v : table.values) used[v] = true;
    for (std::uint32_t sm = 0; sm + 1 < (1u << k); ++sm) {
      std::vector<Elem> sub;
      bool ok = true;
      for (int e = 0; e < k; ++e) {
        bool member = (sm & (1u << e)) || e == 0 || e == k - 1;
        if (used[e] && !member) ok = false;
        if (member) sub.push_back(e);
      }
      if (!ok || static_cast<int>(sub.size()) == k) continue;
      // Each subset is reached once: require the mask to name exactly the
      // members that are neither bottom nor top.
      std::uint32_t canon = 0;
      for (Elem e : sub)
        if (e != 0 && e != k - 1) canon |= 1u << e;
      if (canon != sm) continue;
      if (generated_subalgebra(t.chain(), sub) != sub) continue;
      if (!visit(over_subalgebra(s, sub))) return false;
    }
  }
  return true;
}

bool for_each_strong_map(const Structure& s, const Structure& t,
                         const MapSearch& search, Budget& budget,
                         const std::function<bool(const StructureMap&)>& visit) {
  require_same_language(s, t);
  const int n = s.size();
  if (!search.fixed_g.empty() && static_cast<int>(search.fixed_g.size()) != n)
    throw FormatError("fixed images must name one entry per source element");

  std::vector<AlgebraMap> fs;
  if (search.fix_f_identity) {
    if (!(s.chain() == t.chain())) return true;
    AlgebraMap id = AlgebraMap::identity(s.chain_ptr());
    id.target = t.chain_ptr();
    fs.push_back(std::move(id));
  } else {
    const int ks = s.chain().size(), kt = t.chain().size();
    TupleCounter f(ks, kt);
    do {
      AlgebraMap cand{s.chain_ptr(), t.chain_ptr(), f.current()};
      budget.charge(1, "algebra map search");
      if (search.injective && !cand.injective()) continue;
      if (is_algebra_homomorphism(cand)) fs.push_back(std::move(cand));
    } while (f.next());
  }

  struct PredInfo {
    const std::string* name;
    int arity;
  };
  std::vector<PredInfo> preds;
  for (const auto& [name, table] : s.predicates()) preds.push_back({&name, table.arity});

  for (const AlgebraMap& f : fs) {
    std::vector<int> g(n, -1);
    std::vector<bool> taken(t.size(), false);
    bool stopped = false;

    // Predicate condition on tuples over 0..i that mention i.
    auto consistent = [&](int i) {
      for (const auto& p : preds) {
        TupleCounter d(p.arity, i + 1);
        do {
          const auto& cur = d.current();
          if (std::find(cur.begin(), cur.end(), i) == cur.end()) continue;
          std::vector<int> gd;
          for (int x : cur) gd.push_back(g[x]);
          if (f.map[s.predicate_value(*p.name, cur)] != t.predicate_value(*p.name, gd))
            return false;
        } while (d.next());
      }
      return true;
    };

    std::function<void(int)> assign = [&](int i) {
      if (stopped) return;
      if (i == n) {
        StructureMap m{f, g, search.injective ? MapKind::Embedding : MapKind::Strong, 0};
        if (is_strong_homomorphism(m, s, t) && !visit(m)) stopped = true;
        return;
      }
      for (int y = 0; y < t.size() && !stopped; ++y) {
        if (!search.fixed_g.empty() && search.fixed_g[i] >= 0 && search.fixed_g[i] != y)
          continue;
        if (search.injective && taken[y]) continue;
        budget.charge(1, "domain map search");
        g[i] = y;
        if (consistent(i)) {
          taken[y] = true;
          assign(i + 1);
          taken[y] = false;
        }
        g[i] = -1;
      }
    };
    assign(0);
    if (stopped) return false;
  }
  return true;
}

namespace {

std::optional<StructureMap> first_map(const Structure& s, const Structure& t,
                                      MapSearch search, Budget& budget) {
  std::optional<StructureMap> out;
  for_each_strong_map(s, t, search, budget, [&](const StructureMap& m) {
    out = m;
    return false;
  });
  return out;
}

}  // namespace

std::optional<StructureMap> search_strong_embedding(const Structure& s,
                                                    const Structure& t,
                                                    bool fix_f_identity,
                                                    Budget& budget) {
  return first_map(s, t, {fix_f_identity, true, {}}, budget);
}

std::optional<StructureMap> search_strong_homomorphism(const Structure& s,
                                                       const Structure& t,
                                                       bool fix_f_identity,
                                                       Budget& budget) {
  return first_map(s, t, {fix_f_identity, false, {}}, budget);
}

}  // namespace gradedmt
