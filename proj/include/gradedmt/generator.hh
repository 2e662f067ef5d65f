#pragma once

// Canonical enumeration of formulas over a relational-plus-constants
// signature, evaluated simultaneously in a list of structures ("worlds").
//
// Each generated formula carries its value table in every world: one entry
// per assignment of the variable pool x1..xv. Level 0 holds the atoms over
// the variables, parameters and constants plus the truth constants; level
// L applies one quantifier or one connective to formulas of level < L,
// using at least one formula of level L-1, quantifiers first and then the
// connectives <->, ->, &, /\, \/. With semantic deduplication two
// formulas with the same free variables and the same tables in every world
// are merged, keeping the first; this is exact for any question asked only
// about those worlds. The last level is streamed without being stored, so
// its classes are new with respect to lower levels but may repeat among
// themselves.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gradedmt/budget.hh"
#include "gradedmt/structure.hh"
#include "gradedmt/syntax.hh"

namespace gradedmt {

struct World {
  const Structure* structure = nullptr;
  std::vector<int> params;  // domain index bound to each parameter
};

struct GeneratorOptions {
  int depth = 1;
  int variables = 1;
  bool quantifiers = true;
  bool biconditional = true;
  bool semantic_dedup = true;
  // Constant names under which parameters appear in rendered formulas.
  std::vector<std::string> param_names;
};

struct FormulaClass {
  Formula formula;
  std::uint32_t free_mask = 0;  // bit i set when x(i+1) occurs free
  int depth = 0;
  std::vector<std::uint8_t> values;
};

class TableLayout {
 public:
  TableLayout(std::span<const World> worlds, int variables);

  int worlds() const { return static_cast<int>(sizes_.size()); }
  int variables() const { return variables_; }
  int domain(int w) const { return domains_[w]; }
  std::size_t offset(int w) const { return offsets_[w]; }
  std::size_t size(int w) const { return sizes_[w]; }
  std::size_t total() const { return total_; }
  // Index of the entry for `vars` (one domain index per variable) in world w.
  std::size_t index(int w, std::span<const int> vars) const;

 private:
  int variables_;
  std::vector<int> domains_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> sizes_;
  std::size_t total_ = 0;
};

std::string pool_variable(int i);  // "x1", "x2", ...

class FormulaEnumerator {
 public:
  // Throws SignatureError unless `sig` is relational-plus-constants and
  // every world interprets it.
  FormulaEnumerator(std::vector<World> worlds, Signature sig,
                    GeneratorOptions options, Budget& budget);

  // Visits every class in canonical order. Returns false if `visit`
  // stopped the enumeration.
  bool run(const std::function<bool(const FormulaClass&)>& visit);

  const TableLayout& layout() const { return layout_; }
  const std::vector<World>& worlds() const { return worlds_; }
  const GeneratorOptions& options() const { return options_; }

  Elem value(const FormulaClass& c, int world, std::span<const int> vars) const {
    return c.values[layout_.index(world, vars)];
  }

  // Table after quantifying variable `var` in every world.
  std::vector<std::uint8_t> quantify(std::span<const std::uint8_t> values,
                                     int var, bool universal) const;

 private:
  std::vector<FormulaClass> atoms() const;

  std::vector<World> worlds_;
  Signature sig_;
  GeneratorOptions options_;
  Budget& budget_;
  TableLayout layout_;
  std::vector<std::vector<std::uint8_t>> ops_;  // [world][op] k*k tables
  std::vector<int> chain_sizes_;
  std::vector<FormulaClass> stored_;
};

struct PrenexSentence {
  Formula formula;
  PrenexClass prefix;
  std::vector<Elem> values;  // one per world
};

// Prenex sentences Q x. body whose class fits within `bound`, with bodies
// enumerated quantifier-free up to options.depth. Every free variable of
// the body is quantified, in index order; quantifier-free sentences are
// included.
bool enumerate_prenex(std::vector<World> worlds, const Signature& sig,
                      GeneratorOptions options, PrenexClass bound,
                      Budget& budget,
                      const std::function<bool(const PrenexSentence&)>& visit);

}  // namespace gradedmt
