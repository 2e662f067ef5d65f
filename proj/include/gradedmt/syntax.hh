#pragma once

// Predicate languages, terms and formulas.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gradedmt/chain.hh"

namespace gradedmt {

// Predicates and function symbols with arities. Nullary predicates are
// truth constants, nullary functions are object constants.
class Signature {
 public:
  void add_predicate(const std::string& name, int arity);
  void add_function(const std::string& name, int arity);

  std::optional<int> predicate_arity(const std::string& name) const;
  std::optional<int> function_arity(const std::string& name) const;
  const std::map<std::string, int>& predicates() const { return preds_; }
  const std::map<std::string, int>& functions() const { return funcs_; }

  bool is_expansion_constant(const std::string& name) const {
    return expansion_consts_.contains(name);
  }
  bool is_truth_constant(const std::string& name) const {
    return truth_consts_.contains(name);
  }
  // Chain whose elements are available as truth constants, if any.
  const ChainPtr& truth_chain() const { return truth_chain_; }

  // No function symbol of arity >= 1.
  bool relational_plus_constants() const;
  // Nullary function symbols in name order.
  std::vector<std::string> constants() const;

  bool operator==(const Signature& o) const;

 private:
  friend Signature expand_with_domain_constants(
      const Signature&, std::span<const std::string>);
  friend Signature expand_with_truth_constants(const Signature&, ChainPtr);

  std::map<std::string, int> preds_;
  std::map<std::string, int> funcs_;
  std::set<std::string> expansion_consts_;
  std::set<std::string> truth_consts_;
  ChainPtr truth_chain_;
};

std::string domain_constant_name(std::string_view label);
std::string truth_constant_name(std::string_view label);

// Adds a constant c_m for every domain label. Throws SignatureError on an
// empty domain or a name clash.
Signature expand_with_domain_constants(const Signature& sig,
                                       std::span<const std::string> labels);
// Adds a nullary predicate val(a) per chain element and records the chain.
Signature expand_with_truth_constants(const Signature& sig, ChainPtr chain);

struct Term {
  enum class Kind { Variable, Apply };

  Kind kind = Kind::Variable;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name) { return {Kind::Variable, std::move(name), {}}; }
  static Term apply(std::string f, std::vector<Term> args = {}) {
    return {Kind::Apply, std::move(f), std::move(args)};
  }
  bool is_variable() const { return kind == Kind::Variable; }
  bool operator==(const Term&) const = default;
};

enum class Connective { Strong, Meet, Join, Implies, Iff };

const char* connective_symbol(Connective c);

class Formula {
 public:
  enum class Kind { Atom, Equal, Constant, Not, Binary, Forall, Exists };
  enum class ConstKind { Bottom, Top, Element };

  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula equal(Term lhs, Term rhs);
  static Formula bottom();
  static Formula top();
  // Truth constant for a chain element; the bottom and top normalize to
  // bottom() and top().
  static Formula truth(ChainPtr chain, Elem value);
  static Formula negation(Formula f);
  static Formula binary(Connective c, Formula lhs, Formula rhs);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  Kind kind() const { return node_->kind; }
  bool is_quantifier() const {
    return kind() == Kind::Forall || kind() == Kind::Exists;
  }
  const std::string& predicate() const { return node_->name; }
  const std::vector<Term>& terms() const { return node_->terms; }
  const std::string& variable() const { return node_->name; }
  Connective connective() const { return node_->connective; }
  ConstKind const_kind() const { return node_->const_kind; }
  Elem truth_value() const { return node_->value; }
  const ChainPtr& chain() const { return node_->chain; }
  const Formula& left() const { return node_->children[0]; }
  const Formula& right() const { return node_->children[1]; }
  const Formula& body() const { return node_->children[0]; }

  bool operator==(const Formula& other) const;
  std::size_t hash() const { return node_->hash; }

 private:
  struct Node {
    Kind kind = Kind::Constant;
    std::string name;  // predicate or bound variable
    std::vector<Term> terms;
    Connective connective = Connective::Strong;
    ConstKind const_kind = ConstKind::Top;
    Elem value = 0;
    ChainPtr chain;
    std::vector<Formula> children;
    std::size_t hash = 0;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

std::set<std::string> free_variables(const Term& t);
std::set<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);
bool is_quantifier_free(const Formula& f);
// Nesting depth of connectives and quantifiers; atoms and constants are 0.
int depth(const Formula& f);

// Rewrites not p to p -> 0 and p <-> q to (p -> q) /\ (q -> p). Idempotent.
Formula elaborate(const Formula& f);

// Equality up to renaming of bound variables.
bool alpha_equivalent(const Formula& a, const Formula& b);

// Throws SignatureError on unknown symbols, arity mismatches, or truth
// constants over a chain other than sig.truth_chain().
void check_formula(const Formula& f, const Signature& sig);

struct PrenexClass {
  enum class Kind { QuantifierFree, Forall, Exists, NotPrenex };

  Kind kind = Kind::QuantifierFree;
  int blocks = 0;

  static PrenexClass forall_n(int n) { return {Kind::Forall, n}; }
  static PrenexClass exists_n(int n) { return {Kind::Exists, n}; }
  bool operator==(const PrenexClass&) const = default;
  std::string to_string() const;
};

PrenexClass classify_prenex(const Formula& f);

// Whether a formula of class `actual` is also of class `bound`: Q(n) lies in
// Q(m) for n <= m and in the dual class from m = n + 1 on.
bool fits_within(PrenexClass actual, PrenexClass bound);

}  // namespace gradedmt
