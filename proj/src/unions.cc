#include "gradedmt/unions.hh"

#include "gradedmt/error.hh"
#include "gradedmt/generator.hh"
#include "gradedmt/morphisms.hh"

namespace gradedmt {

StructureChain validate_chain_of_structures(std::vector<Structure> members) {
  if (members.empty()) throw PreconditionError("a chain needs at least one structure");
  StructureChain c;
  c.members = std::move(members);
  c.is_chain = true;
  for (std::size_t i = 0; i + 1 < c.members.size(); ++i) {
    if (!(c.members[i].chain() == c.members[i + 1].chain())) {
      c.is_chain = false;
      c.reason = "members " + std::to_string(i) + " and " + std::to_string(i + 1) +
                 " use different chains";
      break;
    }
    auto r = is_substructure(c.members[i], c.members[i + 1]);
    if (!r.ok) {
      c.is_chain = false;
      c.reason = "member " + std::to_string(i) + " is not a substructure of member " +
                 std::to_string(i + 1) + " (clause " + std::to_string(r.clause) +
                 "): " + r.detail;
      break;
    }
  }
  return c;
}

bool certify_elementary(StructureChain& chain, int depth, Budget& budget,
                        int variables) {
  if (!chain.is_chain) throw PreconditionError("not a valid chain: " + chain.reason);
  for (std::size_t i = 0; i + 1 < chain.members.size(); ++i) {
    const Structure& a = chain.members[i];
    const Structure& b = chain.members[i + 1];
    auto r = is_elementary_up_to_depth(inclusion_map(a, b), a, b, depth,
                                       a.signature(), budget, variables);
    if (!r.ok) return false;
  }
  if (!chain.elementary_depth || *chain.elementary_depth < depth)
    chain.elementary_depth = depth;
  return true;
}

Structure union_of_chain(const StructureChain& chain) {
  if (!chain.is_chain) throw PreconditionError("not a valid chain: " + chain.reason);
  std::vector<std::string> domain;
  std::map<std::string, int> index;
  for (const auto& m : chain.members)
    for (const auto& l : m.domain())
      if (index.emplace(l, static_cast<int>(domain.size())).second) domain.push_back(l);

  const Structure& first = chain.members.front();
  Structure u(first.chain_ptr(), domain);
  const int n = u.size();

  // Per member, the union index of each of its elements.
  std::vector<std::vector<int>> at;
  for (const auto& m : chain.members) {
    std::vector<int> a;
    for (const auto& l : m.domain()) a.push_back(index.at(l));
    at.push_back(std::move(a));
  }
  // Entry for union tuple `d` from every member containing it; all must agree.
  auto lookup = [&](const std::vector<int>& d, auto&& value_in) {
    std::optional<int> found;
    for (std::size_t i = 0; i < chain.members.size(); ++i) {
      const Structure& m = chain.members[i];
      std::vector<int> local;
      for (int x : d) {
        auto j = m.find(domain[x]);
        if (!j) break;
        local.push_back(*j);
      }
      if (local.size() != d.size()) continue;
      int v = value_in(m, local, at[i]);
      if (found && *found != v)
        throw ValidationError("chain members disagree on a table entry");
      found = v;
    }
    if (!found) throw ValidationError("no member contains a tuple of the union");
    return *found;
  };

  for (const auto& [name, table] : first.functions()) {
    FunctionTable ft{table.arity, {}};
    TupleCounter d(table.arity, n);
    do {
      ft.values.push_back(lookup(d.current(), [&](const Structure& m, const std::vector<int>& local,
                                                  const std::vector<int>& a) {
        return a[m.function_value(name, local)];
      }));
    } while (d.next());
    u.set_function(name, std::move(ft));
  }
  for (const auto& [name, table] : first.predicates()) {
    PredicateTable pt{table.arity, {}};
    TupleCounter d(table.arity, n);
    do {
      pt.values.push_back(lookup(d.current(), [&](const Structure& m, const std::vector<int>& local,
                                                  const std::vector<int>&) {
        return m.predicate_value(name, local);
      }));
    } while (d.next());
    u.set_predicate(name, std::move(pt));
  }
  return u;
}

TarskiVaughtReport check_tarski_vaught(const StructureChain& chain, int depth,
                                       Budget& budget, int variables) {
  Structure u = union_of_chain(chain);
  TarskiVaughtReport out;
  out.depth = depth;
  int max_arity = 1;
  for (const auto& [name, table] : u.predicates())
    max_arity = std::max(max_arity, table.arity);
  out.variables = variables > 0 ? variables : std::max(depth, max_arity);

  for (std::size_t i = 0; i < chain.members.size(); ++i) {
    const Structure& m = chain.members[i];
    StructureMap inc = inclusion_map(m, u);
    GeneratorOptions opt;
    opt.depth = depth;
    opt.variables = out.variables;
    opt.quantifiers = false;
    FormulaEnumerator gen({World{&m, {}}, World{&u, {}}}, m.signature(), opt, budget);
    const TableLayout& layout = gen.layout();
    std::vector<std::size_t> target(layout.size(0));
    std::vector<int> a(out.variables), ga(out.variables);
    for (std::size_t k = 0; k < target.size(); ++k) {
      std::size_t rest = k;
      for (int v = 0; v < out.variables; ++v) {
        a[v] = static_cast<int>(rest % m.size());
        rest /= m.size();
        ga[v] = inc.g[a[v]];
      }
      target[k] = layout.index(1, ga);
    }
    gen.run([&](const FormulaClass& c) {
      for (std::size_t k = 0; k < target.size(); ++k) {
        if (c.values[k] == c.values[target[k]]) continue;
        out.quantifier_free_ok = false;
        out.member = i;
        out.formula = c.formula;
        std::size_t rest = k;
        for (int v = 0; v < out.variables; ++v) {
          out.tuple.push_back(static_cast<int>(rest % m.size()));
          rest /= m.size();
        }
        return false;
      }
      return true;
    });
    if (!out.quantifier_free_ok) return out;
  }

  if (chain.elementary_depth && *chain.elementary_depth >= depth) {
    out.elementary_checked = true;
    for (std::size_t i = 0; i < chain.members.size(); ++i) {
      const Structure& m = chain.members[i];
      auto r = is_elementary_up_to_depth(inclusion_map(m, u), m, u, depth,
                                         m.signature(), budget, variables);
      if (!r.ok) {
        out.elementary_ok = false;
        out.member = i;
        out.formula = r.separating;
        out.tuple = r.tuple;
        break;
      }
    }
  }
  return out;
}

}  // namespace gradedmt
