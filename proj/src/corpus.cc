#include "gradedmt/corpus.hh"

#include <functional>
#include <map>
#include <mutex>

#include "gradedmt/error.hh"

namespace gradedmt {

Rng instance_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

namespace {

bool associative(const Table2& s) {
  const int k = static_cast<int>(s.size());
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      for (int z = 0; z < k; ++z)
        if (s[s[x][y]][z] != s[x][s[y][z]]) return false;
  return true;
}

}  // namespace

std::vector<FiniteChain> all_mtl_chains(int k) {
  if (k < 2 || k > 6) throw PreconditionError("chain size must be 2..6");
  std::vector<std::string> labels{"0"};
  for (int i = 1; i + 1 < k; ++i) labels.push_back("a" + std::to_string(i));
  labels.push_back("1");

  Table2 s(k, std::vector<Elem>(k, 0));
  for (int x = 0; x < k; ++x) s[x][k - 1] = s[k - 1][x] = x;
  std::vector<std::pair<int, int>> cells;
  for (int x = 1; x < k - 1; ++x)
    for (int y = x; y < k - 1; ++y) cells.push_back({x, y});

  std::vector<FiniteChain> out;
  std::function<void(std::size_t)> fill = [&](std::size_t i) {
    if (i == cells.size()) {
      if (!associative(s)) return;
      ChainTables t{labels, s, derive_residuum(s), {}};
      out.push_back(FiniteChain::from_tables(std::move(t), "mtl" + std::to_string(k) + "-" +
                                                              std::to_string(out.size())));
      return;
    }
    auto [x, y] = cells[i];
    int lo = std::max(s[x - 1][y], s[x][y - 1]);
    for (int v = lo; v <= x; ++v) {
      s[x][y] = s[y][x] = v;
      fill(i + 1);
    }
    s[x][y] = s[y][x] = 0;
  };
  fill(0);
  return out;
}

ChainPtr random_mtl_chain(int k, Rng& rng) {
  static std::mutex lock;
  static std::map<int, std::vector<ChainPtr>> memo;
  const std::vector<ChainPtr>* all;
  {
    std::lock_guard guard(lock);
    auto& slot = memo[k];
    if (slot.empty())
      for (auto& c : all_mtl_chains(k))
        slot.push_back(std::make_shared<const FiniteChain>(std::move(c)));
    all = &slot;
  }
  return (*all)[rng() % all->size()];
}

Structure random_structure(const Signature& sig, ChainPtr chain,
                           std::vector<std::string> domain, Rng& rng) {
  Structure s(std::move(chain), std::move(domain));
  const int n = s.size();
  const int k = s.chain().size();
  for (const auto& [name, arity] : sig.predicates()) {
    if (sig.is_truth_constant(name)) continue;
    PredicateTable t{arity, {}};
    TupleCounter d(arity, n);
    do t.values.push_back(static_cast<Elem>(rng() % k));
    while (d.next());
    s.set_predicate(name, std::move(t));
  }
  for (const auto& [name, arity] : sig.functions()) {
    FunctionTable t{arity, {}};
    TupleCounter d(arity, n);
    do t.values.push_back(static_cast<int>(rng() % n));
    while (d.next());
    s.set_function(name, std::move(t));
  }
  return s;
}

Structure random_extension(const Structure& s, const std::vector<std::string>& fresh,
                           Rng& rng) {
  auto dom = s.domain();
  dom.insert(dom.end(), fresh.begin(), fresh.end());
  Structure t(s.chain_ptr(), dom);
  const int old = s.size();
  const int n = t.size();
  const int k = s.chain().size();
  auto inside = [&](const std::vector<int>& d) {
    for (int x : d)
      if (x >= old) return false;
    return true;
  };
  for (const auto& [name, table] : s.predicates()) {
    PredicateTable pt{table.arity, {}};
    TupleCounter d(table.arity, n);
    do {
      pt.values.push_back(inside(d.current()) ? s.predicate_value(name, d.current())
                                              : static_cast<Elem>(rng() % k));
    } while (d.next());
    t.set_predicate(name, std::move(pt));
  }
  for (const auto& [name, table] : s.functions()) {
    FunctionTable ft{table.arity, {}};
    TupleCounter d(table.arity, n);
    do {
      ft.values.push_back(inside(d.current()) ? s.function_value(name, d.current())
                                              : static_cast<int>(rng() % n));
    } while (d.next());
    t.set_function(name, std::move(ft));
  }
  return t;
}

Signature suite_signature() {
  Signature s;
  s.add_predicate("P", 1);
  s.add_predicate("R", 2);
  return s;
}

}  // namespace gradedmt
