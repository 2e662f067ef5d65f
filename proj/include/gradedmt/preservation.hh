#pragma once

// Preservation under substructures and unions, the relation between
// structures with parameters given by existential sentences, bounded
// amalgamation, bounded universal consequences and the worked counterexample.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gradedmt/budget.hh"
#include "gradedmt/morphisms.hh"
#include "gradedmt/structure.hh"
#include "gradedmt/syntax.hh"
#include "gradedmt/unions.hh"

namespace gradedmt {

// Limits for generated sentences: quantifier-free bodies up to `depth`
// over the variables x1..x`variables`, plus truth constants when set.
struct GenerationBounds {
  int depth = 1;
  int variables = 2;
  bool truth_constants = true;
};

// Base language of `s`, with the truth constants of its chain if asked.
Signature generation_signature(const Structure& s, bool truth_constants);

struct ImpliesReport {
  bool holds = true;
  int n = 1;
  GenerationBounds bounds;
  std::optional<Formula> separating;  // satisfied on the left only
  Elem left_value = 0;
  Elem right_value = 0;
};

// Every generated prenex sentence of class Exists(n), with the generators
// as parameters c_<label>, that holds in `left` holds in `right`.
ImpliesReport implies_exists_n(const Structure& left, const Structure& right,
                               const std::vector<std::string>& generators, int n,
                               GenerationBounds bounds, Budget& budget);

struct PreservationViolation {
  std::size_t instance = 0;
  std::string formula;
  std::string whole;      // where the sentence holds
  std::string part;       // where it fails
  std::string part_value; // its value there
};

struct PreservationReport {
  std::string claim;
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::map<std::string, std::int64_t> bounds;
  std::uint64_t sentences_checked = 0;
  std::uint64_t violation_count = 0;
  // First violation of each instance.
  std::vector<PreservationViolation> violations;

  bool ok() const { return violation_count == 0; }
};

// Every sentence true in a corpus structure is true in each of its
// substructures.
PreservationReport check_preserved_under_substructures(
    std::span<const Formula> sentences, std::span<const Structure> corpus);

// Every sentence true in all members of a chain is true in its union.
PreservationReport check_preserved_under_unions(
    std::span<const Formula> sentences, std::span<const StructureChain> chains);

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t instances = 200;
  int jobs = 1;
  int max_chain_size = 4;   // algebra elements
  int max_domain = 4;
  GenerationBounds bounds;
  std::uint64_t budget_per_instance = Budget::kDefault;
};

// Random structures (R/2, P/1) over random MTL-chains; generated sentences
// of class `bound` are checked against every substructure. Forall(1) is the
// lemma; Exists(1) is the negative control.
PreservationReport run_substructure_suite(const SuiteOptions& options,
                                          PrenexClass bound);

// Random chains of three structures; generated sentences of class `bound`
// true in all members are checked in the union, and the quantifier-free
// Tarski-Vaught clause on every chain.
PreservationReport run_union_suite(const SuiteOptions& options, PrenexClass bound);

struct AmalgamInstance {
  std::string name;
  std::optional<Structure> common;
  Structure left;
  Structure right;
  std::vector<std::string> generators;  // labels of common elements
};

// Throws PreconditionError unless common is a substructure of left and
// right and is generated by the generators.
void validate_amalgam_instance(const AmalgamInstance& inst);

struct AmalgamOptions {
  int n = 1;
  int max_size = 3;
  int depth = 2;          // elementarity on the right, Forall(1) for n = 2
  int variables = 0;      // 0 uses max(depth, 1)
  bool disjoint = false;  // new left elements go to new elements only
  bool truth_constants = true;
  // Bounds for the precondition and for the Forall(1) check when n = 2.
  GenerationBounds generation;
};

enum class AmalgamStatus { Found, PreconditionFailed, NoneWithinBounds };

const char* amalgam_status_name(AmalgamStatus s);

struct AmalgamResult {
  AmalgamStatus status = AmalgamStatus::NoneWithinBounds;
  ImpliesReport precondition;
  std::optional<Structure> amalgam;
  std::optional<StructureMap> left_map;
  std::optional<StructureMap> right_map;
  std::uint64_t candidates = 0;
  bool budget_exhausted = false;
};

// Structures N extending `right` by at most max_size - |right| new
// elements, in canonical order, such that right is a substructure of N
// elementary to `depth` and left embeds strongly into N by <Id, g> with g
// fixed on the common part (and, for n = 2, every generated Forall(1)
// formula true of a left tuple stays true of its image). Running out of
// budget ends the search as NoneWithinBounds.
AmalgamResult search_amalgam(const AmalgamInstance& inst, const AmalgamOptions& options,
                             Budget& budget);

struct AmalgamVerification {
  bool left_embedding = false;
  bool right_substructure = false;
  bool right_elementary = false;
  bool left_forall1 = true;
  std::string detail;
  bool ok() const {
    return left_embedding && right_substructure && right_elementary && left_forall1;
  }
};

// Re-checks a found amalgam from scratch.
AmalgamVerification verify_amalgam(const AmalgamInstance& inst,
                                   const AmalgamResult& result,
                                   const AmalgamOptions& options, Budget& budget);

struct ConsequenceBounds {
  int depth = 1;
  int variables = 2;
  int max_domain = 3;
};

struct UniversalConsequences {
  std::vector<Formula> sentences;
  std::uint64_t models = 0;
  std::uint64_t candidates = 0;
};

// Universal members of the theory, then every generated Forall(1) sentence
// (no semantic merging) true in all models of size <= max_domain.
UniversalConsequences universal_consequences_bounded(std::span<const Formula> theory,
                                                     const Signature& sig,
                                                     const ChainPtr& chain,
                                                     ConsequenceBounds bounds,
                                                     Budget& budget);

struct ValueAgreement {
  std::optional<Formula> universal;
  std::uint64_t candidates = 0;
};

// First generated Forall(1) sentence whose value equals that of `phi` in
// every corpus structure (not only where `phi` takes the top value).
ValueAgreement find_value_agreeing_universal(const Formula& phi,
                                             std::span<const Structure> corpus,
                                             GenerationBounds bounds, Budget& budget);

struct CounterexampleReport {
  std::string m_value, n_value, threshold;
  std::string forall_in_m, forall_in_n;
  int depth = 2;
  bool base_equivalent = false;
  std::optional<Formula> base_separator;
  std::string sentence;
  std::string sentence_in_m, sentence_in_n;
  std::size_t substructures = 0;
  bool substructures_satisfy = false;
  bool separated() const { return (sentence_in_m == "1") != (sentence_in_n == "1"); }
  bool passed = false;
};

// Goedel 4-chain, three-element M with P = m_value and N with P = n_value,
// sentence val(threshold) -> forall x. P(x). `passed` asks for
// forall x. P(x) to take the values m_value and n_value, equivalence over
// {P} to depth 2, and the sentence true in M and in every substructure of
// M but false in N.
CounterexampleReport reproduce_counterexample(const std::string& m_value = "3/4",
                                              const std::string& n_value = "1/2",
                                              const std::string& threshold = "3/4");

}  // namespace gradedmt
