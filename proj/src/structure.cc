#include "gradedmt/structure.hh"

#include <set>

#include "gradedmt/error.hh"

namespace gradedmt {

std::size_t table_index(std::span<const int> args, int domain_size) {
  std::size_t idx = 0;
  for (int a : args) idx = idx * domain_size + a;
  return idx;
}

bool TupleCounter::next() {
  for (int i = static_cast<int>(digits_.size()) - 1; i >= 0; --i) {
    if (++digits_[i] < base_) return true;
    digits_[i] = 0;
  }
  return false;
}

namespace {

std::size_t cells(int n, int arity) {
  std::size_t c = 1;
  for (int i = 0; i < arity; ++i) c *= n;
  return c;
}

}  // namespace

Structure::Structure(ChainPtr chain, std::vector<std::string> domain)
    : chain_(std::move(chain)), domain_(std::move(domain)) {
  if (!chain_) throw FormatError("structure needs a chain");
  if (domain_.empty()) throw FormatError("structure domain must be non-empty");
  std::set<std::string> seen(domain_.begin(), domain_.end());
  if (seen.size() != domain_.size())
    throw FormatError("domain labels must be distinct");
}

void Structure::set_predicate(const std::string& name, PredicateTable table) {
  if (funcs_.contains(name))
    throw FormatError("'" + name + "' is already a function symbol");
  if (table.arity < 0 || table.values.size() != cells(size(), table.arity))
    throw FormatError("predicate '" + name + "' table must have " +
                      std::to_string(cells(size(), table.arity)) + " entries");
  for (Elem v : table.values)
    if (v < 0 || v >= chain_->size())
      throw FormatError("predicate '" + name + "' value out of chain range");
  preds_[name] = std::move(table);
}

void Structure::set_function(const std::string& name, FunctionTable table) {
  if (preds_.contains(name))
    throw FormatError("'" + name + "' is already a predicate symbol");
  if (table.arity < 0 || table.values.size() != cells(size(), table.arity))
    throw FormatError("function '" + name + "' table must have " +
                      std::to_string(cells(size(), table.arity)) + " entries");
  for (int v : table.values)
    if (v < 0 || v >= size())
      throw FormatError("function '" + name + "' value out of domain range");
  funcs_[name] = std::move(table);
}

std::optional<int> Structure::find(std::string_view label) const {
  for (int i = 0; i < size(); ++i)
    if (domain_[i] == label) return i;
  return std::nullopt;
}

int Structure::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw FormatError("unknown domain element '" + std::string(label) + "'");
}

const PredicateTable* Structure::predicate(const std::string& name) const {
  auto it = preds_.find(name);
  return it == preds_.end() ? nullptr : &it->second;
}

const FunctionTable* Structure::function(const std::string& name) const {
  auto it = funcs_.find(name);
  return it == funcs_.end() ? nullptr : &it->second;
}

Elem Structure::predicate_value(const std::string& name,
                                std::span<const int> args) const {
  const PredicateTable* t = predicate(name);
  if (!t) throw EvalError("predicate '" + name + "' is not interpreted");
  if (static_cast<int>(args.size()) != t->arity)
    throw EvalError("arity mismatch for predicate '" + name + "'");
  return t->values[table_index(args, size())];
}

int Structure::function_value(const std::string& name,
                              std::span<const int> args) const {
  const FunctionTable* t = function(name);
  if (!t) throw EvalError("function '" + name + "' is not interpreted");
  if (static_cast<int>(args.size()) != t->arity)
    throw EvalError("arity mismatch for function '" + name + "'");
  return t->values[table_index(args, size())];
}

Signature Structure::signature() const {
  Signature sig;
  for (const auto& [n, t] : preds_) sig.add_predicate(n, t.arity);
  for (const auto& [n, t] : funcs_) sig.add_function(n, t.arity);
  return sig;
}

Structure Structure::with_constants(
    const std::map<std::string, int>& constants) const {
  Structure out = *this;
  for (const auto& [name, d] : constants) {
    if (out.preds_.contains(name) || out.funcs_.contains(name))
      throw SignatureError("constant '" + name + "' clashes with the structure");
    out.set_function(name, {0, {d}});
  }
  return out;
}

bool Structure::operator==(const Structure& o) const {
  return (chain_ == o.chain_ || *chain_ == *o.chain_) && domain_ == o.domain_ &&
         preds_ == o.preds_ && funcs_ == o.funcs_;
}

}  // namespace gradedmt
