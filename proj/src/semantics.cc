#include "gradedmt/semantics.hh"

#include <algorithm>
#include <cmath>

#include "gradedmt/error.hh"
#include "gradedmt/generator.hh"

namespace gradedmt {

namespace {

class Evaluator {
 public:
  Evaluator(const Structure& s, const Assignment& v) : s_(s), env_(v) {}

  int term(const Term& t) {
    if (t.is_variable()) {
      auto it = env_.find(t.name);
      if (it == env_.end())
        throw EvalError("unassigned variable '" + t.name + "'");
      return it->second;
    }
    if (!s_.function(t.name))
      throw EvalError("uninterpreted function symbol '" + t.name + "'");
    std::vector<int> args;
    args.reserve(t.args.size());
    for (const auto& a : t.args) args.push_back(term(a));
    return s_.function_value(t.name, args);
  }

  Elem formula(const Formula& f) {
    const FiniteChain& ch = s_.chain();
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        if (!s_.predicate(f.predicate()))
          throw EvalError("uninterpreted predicate '" + f.predicate() + "'");
        std::vector<int> args;
        args.reserve(f.terms().size());
        for (const auto& a : f.terms()) args.push_back(term(a));
        return s_.predicate_value(f.predicate(), args);
      }
      case Formula::Kind::Equal:
        return term(f.terms()[0]) == term(f.terms()[1]) ? ch.top() : ch.bottom();
      case Formula::Kind::Constant:
        switch (f.const_kind()) {
          case Formula::ConstKind::Bottom: return ch.bottom();
          case Formula::ConstKind::Top: return ch.top();
          case Formula::ConstKind::Element:
            if (f.chain() != s_.chain_ptr() && !(*f.chain() == ch))
              throw EvalError("truth constant from a different chain");
            return f.truth_value();
        }
        break;
      case Formula::Kind::Not:
        return ch.negate(formula(f.body()));
      case Formula::Kind::Binary: {
        Elem x = formula(f.left());
        Elem y = formula(f.right());
        switch (f.connective()) {
          case Connective::Strong: return ch.star(x, y);
          case Connective::Meet: return ch.meet(x, y);
          case Connective::Join: return ch.join(x, y);
          case Connective::Implies: return ch.implies(x, y);
          case Connective::Iff: return ch.biconditional(x, y);
        }
        break;
      }
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        const bool universal = f.kind() == Formula::Kind::Forall;
        auto saved = env_.find(f.variable()) == env_.end()
                         ? std::optional<int>()
                         : std::optional<int>(env_[f.variable()]);
        Elem acc = universal ? ch.top() : ch.bottom();
        for (int d = 0; d < s_.size(); ++d) {
          env_[f.variable()] = d;
          Elem x = formula(f.body());
          acc = universal ? ch.meet(acc, x) : ch.join(acc, x);
        }
        if (saved) env_[f.variable()] = *saved;
        else env_.erase(f.variable());
        return acc;
      }
    }
    throw EvalError("malformed formula");
  }

 private:
  const Structure& s_;
  Assignment env_;
};

}  // namespace

Assignment assignment_from_labels(const Structure& s,
                                  const std::map<std::string, std::string>& v) {
  Assignment out;
  for (const auto& [var, label] : v) {
    auto d = s.find(label);
    if (!d) throw EvalError("unknown domain element '" + label + "'");
    out[var] = *d;
  }
  return out;
}

int eval_term(const Term& t, const Structure& s, const Assignment& v) {
  return Evaluator(s, v).term(t);
}

Elem eval_formula(const Formula& f, const Structure& s, const Assignment& v) {
  return Evaluator(s, v).formula(f);
}

bool satisfies(const Formula& f, const Structure& s, std::span<const int> tuple) {
  auto vars = free_variables(f);
  if (tuple.size() != vars.size())
    throw EvalError("expected " + std::to_string(vars.size()) +
                    " elements for the free variables");
  Assignment v;
  std::size_t i = 0;
  for (const auto& x : vars) v[x] = tuple[i++];
  return satisfies(f, s, v);
}

bool satisfies(const Formula& f, const Structure& s, const Assignment& v) {
  return eval_formula(f, s, v) == s.chain().top();
}

ModelCheck is_model(std::span<const Formula> theory, const Structure& s) {
  for (std::size_t i = 0; i < theory.size(); ++i) {
    if (!is_sentence(theory[i]))
      throw EvalError("theory member " + std::to_string(i + 1) +
                      " is not a sentence");
    if (!satisfies(theory[i], s, Assignment{})) return {false, i};
  }
  return {};
}

namespace {

struct Cell {
  enum class Kind { Constant, Predicate, Function } kind;
  std::string name;
  std::size_t index;
};

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

std::uint64_t count_structures(const Signature& sig, int chain_size, int size) {
  long double total = 1;
  for (const auto& [name, arity] : sig.predicates()) {
    if (sig.is_truth_constant(name)) continue;
    total *= std::pow(static_cast<long double>(chain_size),
                      static_cast<long double>(ipow(size, arity)));
  }
  for (const auto& [name, arity] : sig.functions())
    total *= std::pow(static_cast<long double>(size),
                      static_cast<long double>(ipow(size, arity)));
  if (total > 1.8e19L) return UINT64_MAX;
  return static_cast<std::uint64_t>(total);
}

bool for_each_structure(const Signature& sig, const ChainPtr& chain, int size,
                        Budget& budget,
                        const std::function<bool(const Structure&)>& visit) {
  std::vector<std::string> labels;
  for (int i = 0; i < size; ++i) labels.push_back("d" + std::to_string(i));
  const int k = chain->size();

  std::vector<Cell> cells;
  std::vector<int> bases;
  for (const auto& c : sig.constants()) {
    cells.push_back({Cell::Kind::Constant, c, 0});
    bases.push_back(size);
  }
  for (const auto& [name, arity] : sig.predicates()) {
    if (sig.is_truth_constant(name)) continue;
    for (std::size_t i = 0; i < ipow(size, arity); ++i) {
      cells.push_back({Cell::Kind::Predicate, name, i});
      bases.push_back(k);
    }
  }
  for (const auto& [name, arity] : sig.functions()) {
    if (arity == 0) continue;
    for (std::size_t i = 0; i < ipow(size, arity); ++i) {
      cells.push_back({Cell::Kind::Function, name, i});
      bases.push_back(size);
    }
  }

  std::vector<int> digits(cells.size(), 0);
  while (true) {
    budget.charge(cells.size() + 1, "structure enumeration");
    Structure s(chain, labels);
    std::map<std::string, PredicateTable> preds;
    std::map<std::string, FunctionTable> funcs;
    for (const auto& [name, arity] : sig.predicates())
      if (!sig.is_truth_constant(name))
        preds[name] = {arity, std::vector<Elem>(ipow(size, arity))};
    for (const auto& [name, arity] : sig.functions())
      funcs[name] = {arity, std::vector<int>(ipow(size, arity))};
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].kind == Cell::Kind::Predicate)
        preds[cells[c].name].values[cells[c].index] = digits[c];
      else
        funcs[cells[c].name].values[cells[c].index] = digits[c];
    }
    for (auto& [name, t] : preds) s.set_predicate(name, std::move(t));
    for (auto& [name, t] : funcs) s.set_function(name, std::move(t));
    if (!visit(s)) return false;

    std::size_t pos = cells.size();
    while (pos > 0) {
      --pos;
      if (++digits[pos] < bases[pos]) break;
      digits[pos] = 0;
      if (pos == 0) return true;
    }
    if (cells.empty()) return true;
  }
}

ConsequenceResult bounded_consequence(std::span<const Formula> theory,
                                      const Formula& phi, const Signature& sig,
                                      const ChainPtr& chain, int max_domain,
                                      Budget& budget) {
  if (max_domain < 1) throw PreconditionError("max domain size must be >= 1");
  if (!is_sentence(phi)) throw EvalError("consequence target is not a sentence");
  for (const auto& f : theory) check_formula(f, sig);
  check_formula(phi, sig);

  ConsequenceResult out;
  out.max_domain = max_domain;
  for (int n = 1; n <= max_domain; ++n) {
    std::uint64_t count = count_structures(sig, chain->size(), n);
    budget.require(count == UINT64_MAX ? count : count + 1,
                   "structures of size " + std::to_string(n));
    bool done = !for_each_structure(sig, chain, n, budget, [&](const Structure& s) {
      ++out.structures_checked;
      if (!is_model(theory, s).ok) return true;
      if (satisfies(phi, s, Assignment{})) return true;
      out.holds = false;
      out.countermodel = s;
      return false;
    });
    if (done) break;
  }
  return out;
}

EquivResult equiv_up_to_depth(const Structure& a, const Structure& b, int depth,
                              const Signature& sig, Budget& budget,
                              int variables) {
  EquivResult out;
  out.depth = depth;
  out.variables = variables > 0 ? variables : depth;
  GeneratorOptions opt;
  opt.depth = depth;
  opt.variables = out.variables;
  FormulaEnumerator gen({World{&a, {}}, World{&b, {}}}, sig, opt, budget);
  const auto& layout = gen.layout();
  const Elem top_a = a.chain().top();
  const Elem top_b = b.chain().top();
  gen.run([&](const FormulaClass& c) {
    if (c.free_mask != 0) return true;
    Elem x = c.values[layout.offset(0)];
    Elem y = c.values[layout.offset(1)];
    if ((x == top_a) == (y == top_b)) return true;
    out.equivalent = false;
    out.separating = c.formula;
    out.left_value = x;
    out.right_value = y;
    return false;
  });
  return out;
}

}  // namespace gradedmt
