#include "gradedmt/chain.hh"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "gradedmt/error.hh"

namespace gradedmt {

namespace {

void check_square(const Table2& t, int k, const char* what) {
  if (static_cast<int>(t.size()) != k)
    throw FormatError(std::string(what) + " table must have " +
                      std::to_string(k) + " rows");
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (static_cast<int>(t[r].size()) != k)
      throw FormatError(std::string(what) + " table row " + std::to_string(r) +
                        " must have " + std::to_string(k) + " entries");
    for (Elem v : t[r])
      if (v < 0 || v >= k)
        throw FormatError(std::string(what) + " table entry " +
                          std::to_string(v) + " out of range");
  }
}

std::size_t power(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Structural axioms shared by validate_chain and derive_residuum.
void check_monoid(const Table2& s, std::vector<Violation>& out) {
  const int k = static_cast<int>(s.size());
  const Elem top = k - 1;
  auto first = [&](std::string axiom, auto&& pred, int arity) {
    std::vector<Elem> w(arity, 0);
    for (std::size_t n = 0; n < power(k, arity); ++n) {
      std::size_t rest = n;
      for (int i = arity - 1; i >= 0; --i) {
        w[i] = static_cast<Elem>(rest % k);
        rest /= k;
      }
      if (!pred(w)) {
        out.push_back({std::move(axiom), w});
        return;
      }
    }
  };
  first("commutativity",
        [&](const auto& w) { return s[w[0]][w[1]] == s[w[1]][w[0]]; }, 2);
  first("identity", [&](const auto& w) { return s[w[0]][top] == w[0]; }, 1);
  first("associativity",
        [&](const auto& w) {
          return s[s[w[0]][w[1]]][w[2]] == s[w[0]][s[w[1]][w[2]]];
        },
        3);
  // witness (x, y, z) with y <= z but star(x, y) > star(x, z)
  first("monotonicity",
        [&](const auto& w) {
          return w[1] > w[2] || s[w[0]][w[1]] <= s[w[0]][w[2]];
        },
        3);
}

}  // namespace

const Violation* ValidationReport::find(std::string_view axiom) const {
  for (const auto& v : violations)
    if (v.axiom == axiom) return &v;
  return nullptr;
}

std::string ValidationReport::describe(
    std::span<const std::string> labels) const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].axiom << " fails at (";
    for (std::size_t j = 0; j < violations[i].witness.size(); ++j) {
      if (j) os << ", ";
      Elem e = violations[i].witness[j];
      if (e >= 0 && static_cast<std::size_t>(e) < labels.size())
        os << labels[e];
      else
        os << e;
    }
    os << ")";
  }
  return os.str();
}

ValidationReport validate_chain(const ChainTables& tables) {
  const int k = static_cast<int>(tables.labels.size());
  if (!tables.implies) throw FormatError("implies table missing");
  check_square(tables.star, k, "star");
  check_square(*tables.implies, k, "implies");
  {
    std::set<std::string> seen(tables.labels.begin(), tables.labels.end());
    if (static_cast<int>(seen.size()) != k)
      throw FormatError("element labels must be distinct");
  }
  for (const auto& [name, op] : tables.extra_ops) {
    if (op.arity < 0 || op.table.size() != power(k, op.arity))
      throw FormatError("extra operation '" + name + "' needs " +
                        std::to_string(power(k, op.arity)) + " entries");
    for (Elem v : op.table)
      if (v < 0 || v >= k)
        throw FormatError("extra operation '" + name + "' entry out of range");
  }

  ValidationReport report;
  if (k < 2) {
    report.violations.push_back({"nontrivial", {}});
    return report;
  }
  check_monoid(tables.star, report.violations);

  const auto& s = tables.star;
  const auto& r = *tables.implies;
  for (Elem x = 0; x < k; ++x)
    for (Elem y = 0; y < k; ++y)
      for (Elem z = 0; z < k; ++z)
        if ((s[x][z] <= y) != (z <= r[x][y])) {
          report.violations.push_back({"residuation", {x, y, z}});
          return report;
        }
  return report;
}

Table2 derive_residuum(const Table2& star) {
  const int k = static_cast<int>(star.size());
  check_square(star, k, "star");
  if (k < 2) throw ValidationError("chain needs at least two elements");
  std::vector<Violation> v;
  check_monoid(star, v);
  std::erase_if(v, [](const Violation& x) { return x.axiom == "associativity"; });
  if (!v.empty()) {
    ValidationReport rep{v};
    std::vector<std::string> labels;
    for (int i = 0; i < k; ++i) labels.push_back(std::to_string(i));
    throw ValidationError("cannot derive residuum: " + rep.describe(labels));
  }
  Table2 out(k, std::vector<Elem>(k, 0));
  for (Elem x = 0; x < k; ++x)
    for (Elem y = 0; y < k; ++y) {
      // star(x, 0) = 0 <= y by monotonicity and identity, so the max exists
      Elem best = 0;
      for (Elem z = 0; z < k; ++z)
        if (star[x][z] <= y) best = z;
      out[x][y] = best;
    }
  return out;
}

FiniteChain FiniteChain::from_tables(ChainTables tables, std::string name) {
  if (!tables.implies) {
    check_square(tables.star, static_cast<int>(tables.labels.size()), "star");
    tables.implies = derive_residuum(tables.star);
  }
  auto report = validate_chain(tables);
  if (!report.ok())
    throw ValidationError("not an MTL-chain: " + report.describe(tables.labels));

  FiniteChain c;
  c.size_ = static_cast<int>(tables.labels.size());
  c.name_ = std::move(name);
  c.labels_ = std::move(tables.labels);
  for (const auto& row : tables.star)
    c.star_.insert(c.star_.end(), row.begin(), row.end());
  for (const auto& row : *tables.implies)
    c.implies_.insert(c.implies_.end(), row.begin(), row.end());
  c.extra_ = std::move(tables.extra_ops);
  return c;
}

std::optional<Elem> FiniteChain::find(std::string_view label) const {
  for (int i = 0; i < size_; ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

Elem FiniteChain::apply_extra(const std::string& op,
                              std::span<const Elem> args) const {
  auto it = extra_.find(op);
  if (it == extra_.end()) throw EvalError("unknown chain operation " + op);
  if (static_cast<int>(args.size()) != it->second.arity)
    throw EvalError("arity mismatch for chain operation " + op);
  std::size_t idx = 0;
  for (Elem a : args) idx = idx * size_ + a;
  return it->second.table[idx];
}

Table2 FiniteChain::star_table() const {
  Table2 t(size_, std::vector<Elem>(size_));
  for (int x = 0; x < size_; ++x)
    for (int y = 0; y < size_; ++y) t[x][y] = star(x, y);
  return t;
}

Table2 FiniteChain::implies_table() const {
  Table2 t(size_, std::vector<Elem>(size_));
  for (int x = 0; x < size_; ++x)
    for (int y = 0; y < size_; ++y) t[x][y] = implies(x, y);
  return t;
}

ChainTables FiniteChain::tables() const {
  return {labels_, star_table(), implies_table(), extra_};
}

bool FiniteChain::operator==(const FiniteChain& o) const {
  return labels_ == o.labels_ && star_ == o.star_ && implies_ == o.implies_ &&
         extra_ == o.extra_;
}

std::vector<Elem> generated_subalgebra(const FiniteChain& chain,
                                       std::span<const Elem> seed) {
  const int k = chain.size();
  std::vector<bool> in(k, false);
  for (Elem e : seed) {
    if (e < 0 || e >= k) throw FormatError("seed element out of range");
    in[e] = true;
  }
  in[chain.bottom()] = in[chain.top()] = true;

  bool changed = true;
  while (changed) {
    changed = false;
    auto add = [&](Elem e) {
      if (!in[e]) in[e] = changed = true;
    };
    std::vector<Elem> cur;
    for (Elem e = 0; e < k; ++e)
      if (in[e]) cur.push_back(e);
    for (Elem x : cur)
      for (Elem y : cur) {
        add(chain.star(x, y));
        add(chain.implies(x, y));
      }
    for (const auto& [name, op] : chain.extra_ops()) {
      std::vector<Elem> args(op.arity);
      std::size_t total = power(cur.size(), op.arity);
      for (std::size_t n = 0; n < total; ++n) {
        std::size_t rest = n;
        for (int i = op.arity - 1; i >= 0; --i) {
          args[i] = cur[rest % cur.size()];
          rest /= cur.size();
        }
        add(chain.apply_extra(name, args));
      }
    }
  }
  std::vector<Elem> out;
  for (Elem e = 0; e < k; ++e)
    if (in[e]) out.push_back(e);
  return out;
}

FiniteChain restrict_chain(const FiniteChain& chain,
                           std::span<const Elem> elements) {
  std::vector<Elem> sorted(elements.begin(), elements.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (generated_subalgebra(chain, sorted) != sorted)
    throw ValidationError("element set is not a subalgebra");

  const int m = static_cast<int>(sorted.size());
  auto pos = [&](Elem e) {
    return static_cast<Elem>(
        std::lower_bound(sorted.begin(), sorted.end(), e) - sorted.begin());
  };
  ChainTables t;
  for (Elem e : sorted) t.labels.push_back(chain.label(e));
  t.star.assign(m, std::vector<Elem>(m));
  t.implies = Table2(m, std::vector<Elem>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      t.star[i][j] = pos(chain.star(sorted[i], sorted[j]));
      (*t.implies)[i][j] = pos(chain.implies(sorted[i], sorted[j]));
    }
  for (const auto& [name, op] : chain.extra_ops()) {
    ExtraOp r{op.arity, {}};
    std::vector<Elem> args(op.arity);
    for (std::size_t n = 0; n < power(m, op.arity); ++n) {
      std::size_t rest = n;
      for (int i = op.arity - 1; i >= 0; --i) {
        args[i] = sorted[rest % m];
        rest /= m;
      }
      r.table.push_back(pos(chain.apply_extra(name, args)));
    }
    t.extra_ops.emplace(name, std::move(r));
  }
  return FiniteChain::from_tables(std::move(t), chain.name() + "-sub");
}

AlgebraMap AlgebraMap::identity(ChainPtr chain) {
  std::vector<Elem> m(chain->size());
  std::iota(m.begin(), m.end(), 0);
  return {chain, chain, std::move(m)};
}

bool AlgebraMap::injective() const {
  std::set<Elem> seen(map.begin(), map.end());
  return seen.size() == map.size();
}

CheckResult is_algebra_homomorphism(const AlgebraMap& m) {
  const FiniteChain& a = *m.source;
  const FiniteChain& b = *m.target;
  if (static_cast<int>(m.map.size()) != a.size())
    throw FormatError("algebra map must have one entry per source element");
  for (Elem v : m.map)
    if (v < 0 || v >= b.size())
      throw FormatError("algebra map entry out of range");
  const auto& f = m.map;
  auto lbl = [&](Elem x) { return a.label(x); };
  if (f[a.bottom()] != b.bottom()) return CheckResult::fail("f(0) != 0");
  if (f[a.top()] != b.top()) return CheckResult::fail("f(1) != 1");
  for (Elem x = 0; x < a.size(); ++x)
    for (Elem y = 0; y < a.size(); ++y) {
      if (f[a.star(x, y)] != b.star(f[x], f[y]))
        return CheckResult::fail("star not preserved at (" + lbl(x) + ", " +
                                 lbl(y) + ")");
      if (f[a.implies(x, y)] != b.implies(f[x], f[y]))
        return CheckResult::fail("implies not preserved at (" + lbl(x) +
                                 ", " + lbl(y) + ")");
    }
  for (const auto& [name, op] : a.extra_ops()) {
    if (!b.extra_ops().contains(name))
      return CheckResult::fail("target lacks operation " + name);
    std::vector<Elem> args(op.arity), mapped(op.arity);
    for (std::size_t n = 0; n < power(a.size(), op.arity); ++n) {
      std::size_t rest = n;
      for (int i = op.arity - 1; i >= 0; --i) {
        args[i] = static_cast<Elem>(rest % a.size());
        mapped[i] = f[args[i]];
        rest /= a.size();
      }
      if (f[a.apply_extra(name, args)] != b.apply_extra(name, mapped))
        return CheckResult::fail(name + " not preserved");
    }
  }
  return {};
}

namespace chains {

FiniteChain godel(std::vector<std::string> labels, std::string name) {
  const int k = static_cast<int>(labels.size());
  ChainTables t;
  t.labels = std::move(labels);
  t.star.assign(k, std::vector<Elem>(k));
  t.implies = Table2(k, std::vector<Elem>(k));
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      t.star[x][y] = std::min(x, y);
      (*t.implies)[x][y] = x <= y ? k - 1 : y;
    }
  return FiniteChain::from_tables(std::move(t), std::move(name));
}

FiniteChain godel4() { return godel({"0", "1/2", "3/4", "1"}, "godel4"); }

FiniteChain lukasiewicz(int n) {
  if (n < 1) throw FormatError("Lukasiewicz chain needs n >= 1");
  ChainTables t;
  for (int i = 0; i <= n; ++i) {
    if (i == 0) {
      t.labels.push_back("0");
    } else if (i == n) {
      t.labels.push_back("1");
    } else {
      int g = std::gcd(i, n);
      t.labels.push_back(std::to_string(i / g) + "/" + std::to_string(n / g));
    }
  }
  t.star.assign(n + 1, std::vector<Elem>(n + 1));
  t.implies = Table2(n + 1, std::vector<Elem>(n + 1));
  for (int x = 0; x <= n; ++x)
    for (int y = 0; y <= n; ++y) {
      t.star[x][y] = std::max(0, x + y - n);
      (*t.implies)[x][y] = std::min(n, n - x + y);
    }
  return FiniteChain::from_tables(std::move(t),
                                  "lukasiewicz" + std::to_string(n + 1));
}

FiniteChain boolean() { return godel({"0", "1"}, "boolean2"); }

}  // namespace chains

}  // namespace gradedmt
