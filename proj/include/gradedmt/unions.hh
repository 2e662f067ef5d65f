#pragma once

// Finite chains of structures, their unions, and the Tarski-Vaught checks.

#include <optional>
#include <string>
#include <vector>

#include "gradedmt/budget.hh"
#include "gradedmt/structure.hh"
#include "gradedmt/syntax.hh"

namespace gradedmt {

struct StructureChain {
  std::vector<Structure> members;
  bool is_chain = false;
  std::string reason;  // why it is not a chain
  // Depth to which every consecutive inclusion was verified elementary.
  std::optional<int> elementary_depth;
};

// Each member must be a substructure of the next, domains nested by label.
StructureChain validate_chain_of_structures(std::vector<Structure> members);

// Checks every consecutive inclusion for elementarity to `depth` and records
// the depth on success. Returns false, leaving the chain unmarked, otherwise.
bool certify_elementary(StructureChain& chain, int depth, Budget& budget,
                        int variables = 0);

// Domain in order of first appearance; tables from the members, checked to
// agree. Throws PreconditionError on an invalid chain.
Structure union_of_chain(const StructureChain& chain);

struct TarskiVaughtReport {
  bool quantifier_free_ok = true;
  bool elementary_checked = false;
  bool elementary_ok = true;
  int depth = 0;
  int variables = 0;
  // First failure: member index, formula over x1..xv and the tuple.
  std::optional<std::size_t> member;
  std::optional<Formula> formula;
  std::vector<int> tuple;
};

// (a) Quantifier-free formulas up to `depth` keep their values from each
// member to the union. (b) When the chain is certified elementary to at
// least `depth`, all generated formulas up to `depth` do.
TarskiVaughtReport check_tarski_vaught(const StructureChain& chain, int depth,
                                       Budget& budget, int variables = 0);

}  // namespace gradedmt
