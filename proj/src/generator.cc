#include "gradedmt/generator.hh"

#include <algorithm>
#include <unordered_set>

#include "gradedmt/error.hh"

namespace gradedmt {

namespace {

constexpr Connective kOps[] = {Connective::Iff, Connective::Implies,
                               Connective::Strong, Connective::Meet,
                               Connective::Join};
constexpr int kOpCount = 5;

int op_index(Connective c) {
  for (int i = 0; i < kOpCount; ++i)
    if (kOps[i] == c) return i;
  return 0;
}

bool commutative(Connective c) { return c != Connective::Implies; }

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void decode(std::size_t idx, int base, std::vector<int>& digits) {
  for (auto& d : digits) {
    d = static_cast<int>(idx % base);
    idx /= base;
  }
}

std::string key_of(const FormulaClass& c) {
  std::string k(sizeof(c.free_mask), '\0');
  for (std::size_t i = 0; i < sizeof(c.free_mask); ++i)
    k[i] = static_cast<char>((c.free_mask >> (8 * i)) & 0xff);
  k.append(c.values.begin(), c.values.end());
  return k;
}

}  // namespace

TableLayout::TableLayout(std::span<const World> worlds, int variables)
    : variables_(variables) {
  for (const auto& w : worlds) {
    int n = w.structure->size();
    domains_.push_back(n);
    offsets_.push_back(total_);
    sizes_.push_back(ipow(n, variables));
    total_ += sizes_.back();
  }
}

std::size_t TableLayout::index(int w, std::span<const int> vars) const {
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (int i = 0; i < variables_; ++i) {
    idx += vars[i] * stride;
    stride *= domains_[w];
  }
  return offsets_[w] + idx;
}

std::string pool_variable(int i) { return "x" + std::to_string(i + 1); }

FormulaEnumerator::FormulaEnumerator(std::vector<World> worlds, Signature sig,
                                     GeneratorOptions options, Budget& budget)
    : worlds_(std::move(worlds)),
      sig_(std::move(sig)),
      options_(std::move(options)),
      budget_(budget),
      layout_(worlds_, options_.variables) {
  if (options_.variables < 0 || options_.variables > 16)
    throw PreconditionError("variable pool must hold 0..16 variables");
  if (options_.depth < 0) throw PreconditionError("depth must be >= 0");
  if (!sig_.relational_plus_constants())
    throw SignatureError(
        "formula generation needs a relational-plus-constants signature");
  for (const auto& w : worlds_) {
    const Structure& s = *w.structure;
    if (s.chain().size() > 255) throw PreconditionError("chain too large");
    if (w.params.size() != options_.param_names.size())
      throw PreconditionError("parameter count differs from parameter names");
    for (int p : w.params)
      if (p < 0 || p >= s.size())
        throw PreconditionError("parameter outside the domain");
    for (const auto& [name, arity] : sig_.predicates()) {
      if (sig_.is_truth_constant(name)) continue;
      const PredicateTable* t = s.predicate(name);
      if (!t || t->arity != arity)
        throw SignatureError("world does not interpret predicate '" + name + "'");
    }
    for (const auto& c : sig_.constants())
      if (!s.function(c))
        throw SignatureError("world does not interpret constant '" + c + "'");
    if (const auto& tc = sig_.truth_chain(); tc && !(*tc == s.chain()))
      throw SignatureError("truth constants belong to a different chain");

    const FiniteChain& ch = s.chain();
    const int k = ch.size();
    chain_sizes_.push_back(k);
    std::vector<std::uint8_t> t(kOpCount * k * k);
    for (int x = 0; x < k; ++x)
      for (int y = 0; y < k; ++y) {
        t[op_index(Connective::Strong) * k * k + x * k + y] = ch.star(x, y);
        t[op_index(Connective::Meet) * k * k + x * k + y] = ch.meet(x, y);
        t[op_index(Connective::Join) * k * k + x * k + y] = ch.join(x, y);
        t[op_index(Connective::Implies) * k * k + x * k + y] = ch.implies(x, y);
        t[op_index(Connective::Iff) * k * k + x * k + y] = ch.biconditional(x, y);
      }
    ops_.push_back(std::move(t));
  }
}

std::vector<FormulaClass> FormulaEnumerator::atoms() const {
  struct PoolTerm {
    Term term;
    int var = -1;    // variable index, or
    int param = -1;  // parameter index, or a constant name in term
  };
  std::vector<PoolTerm> pool;
  for (int i = 0; i < options_.variables; ++i)
    pool.push_back({Term::var(pool_variable(i)), i, -1});
  for (std::size_t j = 0; j < options_.param_names.size(); ++j)
    pool.push_back({Term::apply(options_.param_names[j]), -1, static_cast<int>(j)});
  for (const auto& c : sig_.constants()) pool.push_back({Term::apply(c), -1, -1});

  const int v = options_.variables;
  std::vector<int> digits(v);
  // Domain element a pool term denotes in world w under assignment digits.
  auto denote = [&](const PoolTerm& p, int w) {
    if (p.var >= 0) return digits[p.var];
    if (p.param >= 0) return worlds_[w].params[p.param];
    return worlds_[w].structure->function_value(p.term.name, {});
  };
  auto mask_of = [&](std::span<const PoolTerm* const> ts) {
    std::uint32_t m = 0;
    for (const auto* t : ts)
      if (t->var >= 0) m |= 1u << t->var;
    return m;
  };

  std::vector<FormulaClass> out;
  const int W = layout_.worlds();

  for (const auto& [name, arity] : sig_.predicates()) {
    if (sig_.is_truth_constant(name)) continue;
    if (arity > 0 && pool.empty()) continue;
    TupleCounter tuple(arity, static_cast<int>(pool.size()));
    do {
      std::vector<const PoolTerm*> args;
      std::vector<Term> terms;
      for (int i : tuple.current()) {
        args.push_back(&pool[i]);
        terms.push_back(pool[i].term);
      }
      FormulaClass c{Formula::atom(name, terms), mask_of(args), 0,
                     std::vector<std::uint8_t>(layout_.total())};
      std::vector<int> elems(arity);
      for (int w = 0; w < W; ++w) {
        const Structure& s = *worlds_[w].structure;
        const PredicateTable& t = *s.predicate(name);
        for (std::size_t a = 0; a < layout_.size(w); ++a) {
          decode(a, layout_.domain(w), digits);
          for (int i = 0; i < arity; ++i) elems[i] = denote(*args[i], w);
          c.values[layout_.offset(w) + a] =
              static_cast<std::uint8_t>(t.values[table_index(elems, s.size())]);
        }
      }
      out.push_back(std::move(c));
    } while (tuple.next());
  }

  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i; j < pool.size(); ++j) {
      const PoolTerm* args[] = {&pool[i], &pool[j]};
      FormulaClass c{Formula::equal(pool[i].term, pool[j].term), mask_of(args),
                     0, std::vector<std::uint8_t>(layout_.total())};
      for (int w = 0; w < W; ++w) {
        const int top = chain_sizes_[w] - 1;
        for (std::size_t a = 0; a < layout_.size(w); ++a) {
          decode(a, layout_.domain(w), digits);
          c.values[layout_.offset(w) + a] =
              denote(pool[i], w) == denote(pool[j], w) ? top : 0;
        }
      }
      out.push_back(std::move(c));
    }

  auto constant = [&](const Formula& f, auto&& value_in) {
    FormulaClass c{f, 0, 0, std::vector<std::uint8_t>(layout_.total())};
    for (int w = 0; w < W; ++w)
      for (std::size_t a = 0; a < layout_.size(w); ++a)
        c.values[layout_.offset(w) + a] = static_cast<std::uint8_t>(value_in(w));
    out.push_back(std::move(c));
  };
  constant(Formula::bottom(), [](int) { return 0; });
  if (const auto& tc = sig_.truth_chain())
    for (Elem e = 1; e + 1 < tc->size(); ++e)
      constant(Formula::truth(tc, e), [e](int) { return e; });
  constant(Formula::top(), [&](int w) { return chain_sizes_[w] - 1; });
  return out;
}

std::vector<std::uint8_t> FormulaEnumerator::quantify(
    std::span<const std::uint8_t> values, int var, bool universal) const {
  std::vector<std::uint8_t> out(values.size());
  for (int w = 0; w < layout_.worlds(); ++w) {
    const std::size_t n = layout_.domain(w);
    const std::size_t stride = ipow(n, var);
    const std::size_t off = layout_.offset(w);
    for (std::size_t a = 0; a < layout_.size(w); ++a) {
      const std::size_t digit = (a / stride) % n;
      const std::size_t base = off + a - digit * stride;
      std::uint8_t acc = values[base];
      for (std::size_t d = 1; d < n; ++d) {
        std::uint8_t x = values[base + d * stride];
        acc = universal ? std::min(acc, x) : std::max(acc, x);
      }
      out[off + a] = acc;
    }
  }
  return out;
}

bool FormulaEnumerator::run(
    const std::function<bool(const FormulaClass&)>& visit) {
  stored_.clear();
  std::unordered_set<std::string> seen;
  bool stopped = false;

  // Visits c, storing it for later levels when `store`; false stops.
  auto offer = [&](FormulaClass&& c, bool store) -> bool {
    budget_.charge(c.values.size() + 1, "formula generation");
    if (options_.semantic_dedup) {
      std::string k = key_of(c);
      if (seen.contains(k)) return true;
      if (store) seen.insert(std::move(k));
    }
    if (store) {
      stored_.push_back(std::move(c));
      if (!visit(stored_.back())) stopped = true;
    } else if (!visit(c)) {
      stopped = true;
    }
    return !stopped;
  };

  std::vector<std::size_t> level_begin{0};
  for (auto& a : atoms())
    if (!offer(std::move(a), options_.depth > 0)) return false;

  const int W = layout_.worlds();
  for (int level = 1; level <= options_.depth; ++level) {
    const bool store = level < options_.depth;
    const std::size_t prev_begin = level_begin.back();
    const std::size_t prev_end = stored_.size();
    level_begin.push_back(prev_end);

    if (options_.quantifiers) {
      for (std::size_t i = prev_begin; i < prev_end; ++i)
        for (int var = 0; var < options_.variables; ++var) {
          if (!(stored_[i].free_mask & (1u << var))) continue;
          for (bool universal : {true, false}) {
            const FormulaClass& src = stored_[i];
            FormulaClass c{
                universal ? Formula::forall(pool_variable(var), src.formula)
                          : Formula::exists(pool_variable(var), src.formula),
                src.free_mask & ~(1u << var), level,
                quantify(src.values, var, universal)};
            if (!offer(std::move(c), store)) return false;
          }
        }
    }

    for (Connective op : kOps) {
      if (op == Connective::Iff && !options_.biconditional) continue;
      const int oi = op_index(op);
      for (std::size_t a = 0; a < prev_end; ++a)
        for (std::size_t b = commutative(op) ? a : 0; b < prev_end; ++b) {
          if (a < prev_begin && b < prev_begin) continue;
          const FormulaClass& A = stored_[a];
          const FormulaClass& B = stored_[b];
          FormulaClass c{Formula::binary(op, A.formula, B.formula),
                         A.free_mask | B.free_mask, level,
                         std::vector<std::uint8_t>(layout_.total())};
          for (int w = 0; w < W; ++w) {
            const int k = chain_sizes_[w];
            const std::uint8_t* t = ops_[w].data() + oi * k * k;
            const std::size_t off = layout_.offset(w);
            for (std::size_t i = off; i < off + layout_.size(w); ++i)
              c.values[i] = t[A.values[i] * k + B.values[i]];
          }
          if (!offer(std::move(c), store)) return false;
        }
    }
  }
  return true;
}

bool enumerate_prenex(std::vector<World> worlds, const Signature& sig,
                      GeneratorOptions options, PrenexClass bound,
                      Budget& budget,
                      const std::function<bool(const PrenexSentence&)>& visit) {
  options.quantifiers = false;
  FormulaEnumerator gen(std::move(worlds), sig, options, budget);
  const TableLayout& layout = gen.layout();
  return gen.run([&](const FormulaClass& body) {
    std::vector<int> vars;
    for (int i = 0; i < options.variables; ++i)
      if (body.free_mask & (1u << i)) vars.push_back(i);
    const int m = static_cast<int>(vars.size());
    for (std::uint32_t pattern = 0; pattern < (1u << m); ++pattern) {
      // bit j set: variable vars[j] is bound existentially
      PrenexClass prefix;
      if (m > 0) {
        bool first_exists = pattern & 1u;
        int blocks = 1;
        for (int j = 1; j < m; ++j)
          if (((pattern >> j) & 1u) != ((pattern >> (j - 1)) & 1u)) ++blocks;
        prefix = first_exists ? PrenexClass::exists_n(blocks)
                              : PrenexClass::forall_n(blocks);
      }
      if (!fits_within(prefix, bound)) continue;

      std::vector<std::uint8_t> values = body.values;
      Formula f = body.formula;
      for (int j = m - 1; j >= 0; --j) {
        bool universal = !((pattern >> j) & 1u);
        values = gen.quantify(values, vars[j], universal);
        f = universal ? Formula::forall(pool_variable(vars[j]), f)
                      : Formula::exists(pool_variable(vars[j]), f);
      }
      PrenexSentence s{f, prefix, {}};
      for (int w = 0; w < layout.worlds(); ++w)
        s.values.push_back(values[layout.offset(w)]);
      if (!visit(s)) return false;
    }
    return true;
  });
}

}  // namespace gradedmt
