#pragma once

// Finite MTL-chains given by operation tables.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gradedmt {

// Index of a chain element; 0 is the bottom, size()-1 the top.
using Elem = int;

using Table2 = std::vector<std::vector<Elem>>;

struct ExtraOp {
  int arity = 0;
  std::vector<Elem> table;  // row-major, size^arity entries

  bool operator==(const ExtraOp&) const = default;
};

// Unvalidated chain data as read from a file or built by hand.
struct ChainTables {
  std::vector<std::string> labels;
  Table2 star;
  std::optional<Table2> implies;
  std::map<std::string, ExtraOp> extra_ops;
};

struct Violation {
  std::string axiom;
  std::vector<Elem> witness;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  const Violation* find(std::string_view axiom) const;
  std::string describe(std::span<const std::string> labels) const;
};

// Checks every MTL-chain axiom exhaustively. Throws FormatError when the
// tables are not size x size over valid indices; axiom failures are
// reported, one entry per violated axiom with its first witness in
// lexicographic order. `implies` must be present.
ValidationReport validate_chain(const ChainTables& tables);

// implies(x, y) = max { z : star(x, z) <= y }. Throws ValidationError when
// star is not commutative, monotone, with the top as identity.
Table2 derive_residuum(const Table2& star);

class FiniteChain {
 public:
  // Derives `implies` when absent, then validates. Throws ValidationError
  // carrying the report description on failure.
  static FiniteChain from_tables(ChainTables tables, std::string name = {});

  int size() const { return size_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Elem e) const { return labels_.at(e); }
  std::optional<Elem> find(std::string_view label) const;

  Elem bottom() const { return 0; }
  Elem top() const { return size_ - 1; }
  // Immediate predecessor of the top.
  Elem coatom() const { return size_ - 2; }

  Elem meet(Elem x, Elem y) const { return x < y ? x : y; }
  Elem join(Elem x, Elem y) const { return x < y ? y : x; }
  Elem star(Elem x, Elem y) const { return star_[x * size_ + y]; }
  Elem implies(Elem x, Elem y) const { return implies_[x * size_ + y]; }
  Elem negate(Elem x) const { return implies(x, bottom()); }
  Elem biconditional(Elem x, Elem y) const {
    return meet(implies(x, y), implies(y, x));
  }

  const std::map<std::string, ExtraOp>& extra_ops() const { return extra_; }
  Elem apply_extra(const std::string& op, std::span<const Elem> args) const;

  Table2 star_table() const;
  Table2 implies_table() const;
  ChainTables tables() const;

  // Structural equality; the name is ignored.
  bool operator==(const FiniteChain& other) const;

 private:
  FiniteChain() = default;

  int size_ = 0;
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<Elem> star_;
  std::vector<Elem> implies_;
  std::map<std::string, ExtraOp> extra_;
};

using ChainPtr = std::shared_ptr<const FiniteChain>;

// Least superset of seed u {0, 1} closed under star, implies and the extra
// operations. Result is sorted ascending.
std::vector<Elem> generated_subalgebra(const FiniteChain& chain,
                                       std::span<const Elem> seed);

// The chain restricted to `elements`, which must be closed (see
// generated_subalgebra); labels are kept.
FiniteChain restrict_chain(const FiniteChain& chain,
                           std::span<const Elem> elements);

struct AlgebraMap {
  ChainPtr source;
  ChainPtr target;
  std::vector<Elem> map;  // one target index per source element

  static AlgebraMap identity(ChainPtr chain);
  bool injective() const;
};

struct CheckResult {
  bool ok = true;
  std::string counterexample;

  explicit operator bool() const { return ok; }
  static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

// Preservation of 0, 1, star, implies and same-named extra operations,
// checked over all pairs. Throws FormatError on a size mismatch.
CheckResult is_algebra_homomorphism(const AlgebraMap& m);

namespace chains {

// Goedel chain: star = min, implies(x, y) = 1 if x <= y else y.
FiniteChain godel(std::vector<std::string> labels, std::string name = "godel");
// Goedel chain {0, 1/2, 3/4, 1}.
FiniteChain godel4();
// Lukasiewicz chain {0, 1/n, ..., 1}.
FiniteChain lukasiewicz(int n);
FiniteChain boolean();

}  // namespace chains

}  // namespace gradedmt
