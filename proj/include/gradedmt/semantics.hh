#pragma once

// Truth values of formulas in finite structures, satisfaction, models and
// bounded consequence.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gradedmt/budget.hh"
#include "gradedmt/structure.hh"
#include "gradedmt/syntax.hh"

namespace gradedmt {

// Variable name to domain index.
using Assignment = std::map<std::string, int>;

Assignment assignment_from_labels(const Structure& s,
                                  const std::map<std::string, std::string>& v);

// Throws EvalError on an unassigned variable or uninterpreted symbol.
int eval_term(const Term& t, const Structure& s, const Assignment& v = {});

// Quantifiers take the minimum/maximum over the domain. Throws EvalError on
// unassigned variables, uninterpreted symbols, or a truth constant from a
// different chain.
Elem eval_formula(const Formula& f, const Structure& s, const Assignment& v = {});

// Value equals the top. `tuple` assigns the free variables in name order.
bool satisfies(const Formula& f, const Structure& s, std::span<const int> tuple);
bool satisfies(const Formula& f, const Structure& s, const Assignment& v);

struct ModelCheck {
  bool ok = true;
  std::optional<std::size_t> failing;  // index into the theory
};

// Throws EvalError if a member of the theory is not a sentence.
ModelCheck is_model(std::span<const Formula> theory, const Structure& s);

// Calls `visit` on every structure for `sig` over `chain` with domain
// d0..d(size-1), constants first then predicate and function cells in
// lexicographic order. Stops when `visit` returns false; returns false then.
bool for_each_structure(const Signature& sig, const ChainPtr& chain, int size,
                        Budget& budget,
                        const std::function<bool(const Structure&)>& visit);

std::uint64_t count_structures(const Signature& sig, int chain_size, int size);

struct ConsequenceResult {
  bool holds = true;
  std::optional<Structure> countermodel;
  std::uint64_t structures_checked = 0;
  int max_domain = 0;
};

// Every model of `theory` with at most `max_domain` elements satisfies phi.
// The first countermodel in canonical order is returned.
ConsequenceResult bounded_consequence(std::span<const Formula> theory,
                                      const Formula& phi, const Signature& sig,
                                      const ChainPtr& chain, int max_domain,
                                      Budget& budget);

struct EquivResult {
  bool equivalent = true;
  std::optional<Formula> separating;
  Elem left_value = 0;
  Elem right_value = 0;
  int depth = 0;
  int variables = 0;
};

// Compares which generated sentences of depth <= `depth` over `sig` hold
// (take the top value) in each structure. `variables` = 0 uses `depth`.
EquivResult equiv_up_to_depth(const Structure& a, const Structure& b, int depth,
                              const Signature& sig, Budget& budget,
                              int variables = 0);

}  // namespace gradedmt
