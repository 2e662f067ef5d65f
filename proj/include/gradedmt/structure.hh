#pragma once

// Structures <A, M>: a finite domain with fuzzy predicate tables into a
// chain and crisp function tables.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gradedmt/chain.hh"
#include "gradedmt/syntax.hh"

namespace gradedmt {

// Row-major over the domain, first argument most significant.
struct PredicateTable {
  int arity = 0;
  std::vector<Elem> values;
  bool operator==(const PredicateTable&) const = default;
};

struct FunctionTable {
  int arity = 0;
  std::vector<int> values;  // domain indices
  bool operator==(const FunctionTable&) const = default;
};

class Structure {
 public:
  // Throws FormatError on an empty domain or duplicate labels.
  Structure(ChainPtr chain, std::vector<std::string> domain);

  // Tables must be total (size^arity entries) and in range.
  void set_predicate(const std::string& name, PredicateTable table);
  void set_function(const std::string& name, FunctionTable table);

  const FiniteChain& chain() const { return *chain_; }
  const ChainPtr& chain_ptr() const { return chain_; }
  int size() const { return static_cast<int>(domain_.size()); }
  const std::vector<std::string>& domain() const { return domain_; }
  const std::string& label(int d) const { return domain_.at(d); }
  std::optional<int> find(std::string_view label) const;
  // Throws FormatError for unknown labels.
  int index_of(std::string_view label) const;

  const std::map<std::string, PredicateTable>& predicates() const { return preds_; }
  const std::map<std::string, FunctionTable>& functions() const { return funcs_; }
  const PredicateTable* predicate(const std::string& name) const;
  const FunctionTable* function(const std::string& name) const;

  Elem predicate_value(const std::string& name, std::span<const int> args) const;
  int function_value(const std::string& name, std::span<const int> args) const;

  // Interpreted symbols with their arities; no truth constants.
  Signature signature() const;

  // Copy with extra nullary functions interpreted as the given elements.
  Structure with_constants(const std::map<std::string, int>& constants) const;

  bool operator==(const Structure& other) const;

 private:
  ChainPtr chain_;
  std::vector<std::string> domain_;
  std::map<std::string, PredicateTable> preds_;
  std::map<std::string, FunctionTable> funcs_;
};

std::size_t table_index(std::span<const int> args, int domain_size);

// Element tuples of the given length in lexicographic order, as an odometer.
class TupleCounter {
 public:
  TupleCounter(int length, int base) : digits_(length, 0), base_(base) {}
  const std::vector<int>& current() const { return digits_; }
  // False once every tuple has been produced.
  bool next();

 private:
  std::vector<int> digits_;
  int base_;
};

}  // namespace gradedmt
