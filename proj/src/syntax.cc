#include "gradedmt/syntax.hh"

#include <functional>
#include <unordered_map>

#include "gradedmt/error.hh"

namespace gradedmt {

namespace {

void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_term(const Term& t) {
  std::size_t h = std::hash<std::string>{}(t.name);
  hash_combine(h, static_cast<std::size_t>(t.kind));
  for (const auto& a : t.args) hash_combine(h, hash_term(a));
  return h;
}

}  // namespace

// Signature

void Signature::add_predicate(const std::string& name, int arity) {
  if (arity < 0) throw SignatureError("negative arity for " + name);
  if (funcs_.contains(name))
    throw SignatureError("'" + name + "' is already a function symbol");
  auto [it, fresh] = preds_.emplace(name, arity);
  if (!fresh && it->second != arity)
    throw SignatureError("predicate '" + name + "' redeclared with arity " +
                         std::to_string(arity));
}

void Signature::add_function(const std::string& name, int arity) {
  if (arity < 0) throw SignatureError("negative arity for " + name);
  if (preds_.contains(name))
    throw SignatureError("'" + name + "' is already a predicate symbol");
  auto [it, fresh] = funcs_.emplace(name, arity);
  if (!fresh && it->second != arity)
    throw SignatureError("function '" + name + "' redeclared with arity " +
                         std::to_string(arity));
}

std::optional<int> Signature::predicate_arity(const std::string& name) const {
  auto it = preds_.find(name);
  if (it == preds_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Signature::function_arity(const std::string& name) const {
  auto it = funcs_.find(name);
  if (it == funcs_.end()) return std::nullopt;
  return it->second;
}

bool Signature::relational_plus_constants() const {
  for (const auto& [_, a] : funcs_)
    if (a > 0) return false;
  return true;
}

std::vector<std::string> Signature::constants() const {
  std::vector<std::string> out;
  for (const auto& [n, a] : funcs_)
    if (a == 0) out.push_back(n);
  return out;
}

bool Signature::operator==(const Signature& o) const {
  bool chains_equal = truth_chain_ == o.truth_chain_ ||
                      (truth_chain_ && o.truth_chain_ &&
                       *truth_chain_ == *o.truth_chain_);
  return preds_ == o.preds_ && funcs_ == o.funcs_ &&
         expansion_consts_ == o.expansion_consts_ &&
         truth_consts_ == o.truth_consts_ && chains_equal;
}

std::string domain_constant_name(std::string_view label) {
  return "c_" + std::string(label);
}

std::string truth_constant_name(std::string_view label) {
  return "val(" + std::string(label) + ")";
}

Signature expand_with_domain_constants(const Signature& sig,
                                       std::span<const std::string> labels) {
  if (labels.empty())
    throw SignatureError("structures have a non-empty domain");
  Signature out = sig;
  for (const auto& l : labels) {
    std::string name = domain_constant_name(l);
    if (out.preds_.contains(name) || out.funcs_.contains(name))
      throw SignatureError("constant '" + name + "' clashes with the signature");
    out.funcs_.emplace(name, 0);
    out.expansion_consts_.insert(name);
  }
  return out;
}

Signature expand_with_truth_constants(const Signature& sig, ChainPtr chain) {
  if (sig.truth_chain_)
    throw SignatureError("signature already has truth constants");
  Signature out = sig;
  for (const auto& l : chain->labels()) {
    std::string name = truth_constant_name(l);
    if (out.preds_.contains(name) || out.funcs_.contains(name))
      throw SignatureError("truth constant '" + name +
                           "' clashes with the signature");
    out.preds_.emplace(name, 0);
    out.truth_consts_.insert(name);
  }
  out.truth_chain_ = std::move(chain);
  return out;
}

const char* connective_symbol(Connective c) {
  switch (c) {
    case Connective::Strong: return "&";
    case Connective::Meet: return "/\\";
    case Connective::Join: return "\\/";
    case Connective::Implies: return "->";
    case Connective::Iff: return "<->";
  }
  return "?";
}

// Formula

Formula Formula::make(Node n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911u;
  hash_combine(h, std::hash<std::string>{}(n.name));
  for (const auto& t : n.terms) hash_combine(h, hash_term(t));
  hash_combine(h, static_cast<std::size_t>(n.connective));
  hash_combine(h, static_cast<std::size_t>(n.const_kind));
  hash_combine(h, static_cast<std::size_t>(n.value));
  for (const auto& c : n.children) hash_combine(h, c.hash());
  n.hash = h;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  Node n;
  n.kind = Kind::Atom;
  n.name = std::move(predicate);
  n.terms = std::move(args);
  return make(std::move(n));
}

Formula Formula::equal(Term lhs, Term rhs) {
  Node n;
  n.kind = Kind::Equal;
  n.terms = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

Formula Formula::bottom() {
  static const Formula f = [] {
    Node n;
    n.const_kind = ConstKind::Bottom;
    return make(std::move(n));
  }();
  return f;
}

Formula Formula::top() {
  static const Formula f = [] {
    Node n;
    n.const_kind = ConstKind::Top;
    return make(std::move(n));
  }();
  return f;
}

Formula Formula::truth(ChainPtr chain, Elem value) {
  if (value < 0 || value >= chain->size())
    throw FormatError("truth constant out of range");
  if (value == chain->bottom()) return bottom();
  if (value == chain->top()) return top();
  Node n;
  n.const_kind = ConstKind::Element;
  n.value = value;
  n.chain = std::move(chain);
  return make(std::move(n));
}

Formula Formula::negation(Formula f) {
  Node n;
  n.kind = Kind::Not;
  n.children = {std::move(f)};
  return make(std::move(n));
}

Formula Formula::binary(Connective c, Formula lhs, Formula rhs) {
  Node n;
  n.kind = Kind::Binary;
  n.connective = c;
  n.children = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
  Node n;
  n.kind = Kind::Forall;
  n.name = std::move(var);
  n.children = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
  Node n;
  n.kind = Kind::Exists;
  n.name = std::move(var);
  n.children = {std::move(body)};
  return make(std::move(n));
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  const Node& a = *node_;
  const Node& b = *o.node_;
  if (a.hash != b.hash || a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Atom:
      return a.name == b.name && a.terms == b.terms;
    case Kind::Equal:
      return a.terms == b.terms;
    case Kind::Constant:
      if (a.const_kind != b.const_kind) return false;
      if (a.const_kind != ConstKind::Element) return true;
      return a.value == b.value &&
             (a.chain == b.chain || *a.chain == *b.chain);
    case Kind::Not:
      return a.children[0] == b.children[0];
    case Kind::Binary:
      return a.connective == b.connective && a.children[0] == b.children[0] &&
             a.children[1] == b.children[1];
    case Kind::Forall:
    case Kind::Exists:
      return a.name == b.name && a.children[0] == b.children[0];
  }
  return false;
}

// Free variables and shape queries

namespace {

void collect(const Term& t, std::set<std::string>& out) {
  if (t.is_variable())
    out.insert(t.name);
  else
    for (const auto& a : t.args) collect(a, out);
}

}  // namespace

std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> out;
  collect(t, out);
  return out;
}

std::set<std::string> free_variables(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::Equal: {
      std::set<std::string> out;
      for (const auto& t : f.terms()) collect(t, out);
      return out;
    }
    case K::Constant:
      return {};
    case K::Not:
      return free_variables(f.body());
    case K::Binary: {
      auto out = free_variables(f.left());
      out.merge(free_variables(f.right()));
      return out;
    }
    case K::Forall:
    case K::Exists: {
      auto out = free_variables(f.body());
      out.erase(f.variable());
      return out;
    }
  }
  return {};
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

bool is_quantifier_free(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Forall:
    case K::Exists:
      return false;
    case K::Not:
      return is_quantifier_free(f.body());
    case K::Binary:
      return is_quantifier_free(f.left()) && is_quantifier_free(f.right());
    default:
      return true;
  }
}

int depth(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not:
    case K::Forall:
    case K::Exists:
      return 1 + depth(f.body());
    case K::Binary:
      return 1 + std::max(depth(f.left()), depth(f.right()));
    default:
      return 0;
  }
}

Formula elaborate(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not:
      return Formula::binary(Connective::Implies, elaborate(f.body()),
                             Formula::bottom());
    case K::Binary: {
      Formula l = elaborate(f.left());
      Formula r = elaborate(f.right());
      if (f.connective() == Connective::Iff)
        return Formula::binary(Connective::Meet,
                               Formula::binary(Connective::Implies, l, r),
                               Formula::binary(Connective::Implies, r, l));
      return Formula::binary(f.connective(), l, r);
    }
    case K::Forall:
      return Formula::forall(f.variable(), elaborate(f.body()));
    case K::Exists:
      return Formula::exists(f.variable(), elaborate(f.body()));
    default:
      return f;
  }
}

namespace {

using Renaming = std::vector<std::pair<std::string, std::string>>;

// Bound variables are compared through the stack of binder pairs, innermost
// first; free variables must match by name and not be captured.
bool alpha_var(const std::string& a, const std::string& b, const Renaming& r) {
  for (auto it = r.rbegin(); it != r.rend(); ++it) {
    bool ha = it->first == a;
    bool hb = it->second == b;
    if (ha || hb) return ha && hb;
  }
  return a == b;
}

bool alpha_term(const Term& a, const Term& b, const Renaming& r) {
  if (a.kind != b.kind) return false;
  if (a.is_variable()) return alpha_var(a.name, b.name, r);
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!alpha_term(a.args[i], b.args[i], r)) return false;
  return true;
}

bool alpha(const Formula& a, const Formula& b, Renaming& r) {
  using K = Formula::Kind;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::Atom:
      if (a.predicate() != b.predicate()) return false;
      [[fallthrough]];
    case K::Equal: {
      if (a.terms().size() != b.terms().size()) return false;
      for (std::size_t i = 0; i < a.terms().size(); ++i)
        if (!alpha_term(a.terms()[i], b.terms()[i], r)) return false;
      return true;
    }
    case K::Constant:
      return a == b;
    case K::Not:
      return alpha(a.body(), b.body(), r);
    case K::Binary:
      return a.connective() == b.connective() && alpha(a.left(), b.left(), r) &&
             alpha(a.right(), b.right(), r);
    case K::Forall:
    case K::Exists: {
      r.emplace_back(a.variable(), b.variable());
      bool ok = alpha(a.body(), b.body(), r);
      r.pop_back();
      return ok;
    }
  }
  return false;
}

void check_term(const Term& t, const Signature& sig) {
  if (t.is_variable()) return;
  auto ar = sig.function_arity(t.name);
  if (!ar) throw SignatureError("unknown function symbol '" + t.name + "'");
  if (*ar != static_cast<int>(t.args.size()))
    throw SignatureError("function '" + t.name + "' expects " +
                         std::to_string(*ar) + " arguments");
  for (const auto& a : t.args) check_term(a, sig);
}

}  // namespace

bool alpha_equivalent(const Formula& a, const Formula& b) {
  Renaming r;
  return alpha(a, b, r);
}

void check_formula(const Formula& f, const Signature& sig) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      auto ar = sig.predicate_arity(f.predicate());
      if (!ar)
        throw SignatureError("unknown predicate '" + f.predicate() + "'");
      if (*ar != static_cast<int>(f.terms().size()))
        throw SignatureError("predicate '" + f.predicate() + "' expects " +
                             std::to_string(*ar) + " arguments");
      for (const auto& t : f.terms()) check_term(t, sig);
      return;
    }
    case K::Equal:
      for (const auto& t : f.terms()) check_term(t, sig);
      return;
    case K::Constant:
      if (f.const_kind() == Formula::ConstKind::Element) {
        const auto& tc = sig.truth_chain();
        if (!tc || !(*tc == *f.chain()))
          throw SignatureError(
              "truth constant over a chain the signature does not carry");
      }
      return;
    case K::Not:
    case K::Forall:
    case K::Exists:
      check_formula(f.body(), sig);
      return;
    case K::Binary:
      check_formula(f.left(), sig);
      check_formula(f.right(), sig);
      return;
  }
}

std::string PrenexClass::to_string() const {
  switch (kind) {
    case Kind::QuantifierFree: return "QuantifierFree";
    case Kind::Forall: return "Forall(" + std::to_string(blocks) + ")";
    case Kind::Exists: return "Exists(" + std::to_string(blocks) + ")";
    case Kind::NotPrenex: return "NotPrenex";
  }
  return "?";
}

PrenexClass classify_prenex(const Formula& f) {
  const Formula* cur = &f;
  int blocks = 0;
  Formula::Kind first = Formula::Kind::Constant;
  Formula::Kind last = Formula::Kind::Constant;
  while (cur->is_quantifier()) {
    if (blocks == 0) first = cur->kind();
    if (blocks == 0 || cur->kind() != last) ++blocks;
    last = cur->kind();
    cur = &cur->body();
  }
  if (!is_quantifier_free(*cur)) return {PrenexClass::Kind::NotPrenex, 0};
  if (blocks == 0) return {};
  return first == Formula::Kind::Forall ? PrenexClass::forall_n(blocks)
                                        : PrenexClass::exists_n(blocks);
}

bool fits_within(PrenexClass actual, PrenexClass bound) {
  using K = PrenexClass::Kind;
  if (actual.kind == K::NotPrenex || bound.kind == K::NotPrenex) return false;
  if (actual.kind == K::QuantifierFree) return true;
  if (bound.kind == K::QuantifierFree) return false;
  if (actual.kind == bound.kind) return actual.blocks <= bound.blocks;
  return actual.blocks + 1 <= bound.blocks;
}

}  // namespace gradedmt
