#pragma once

// Seeded random formulas over a fixed signature, for property tests.

#include <random>
#include <string>
#include <vector>

#include "gradedmt/syntax.hh"

namespace gradedmt::testing {

struct RandomFormulas {
  Signature sig;  // P/1, R/2, f/1, c, and truth constants when a chain is set
  ChainPtr chain;
  std::vector<std::string> vars{"x", "y", "z"};

  explicit RandomFormulas(ChainPtr truth = nullptr) : chain(std::move(truth)) {
    sig.add_predicate("P", 1);
    sig.add_predicate("R", 2);
    sig.add_function("f", 1);
    sig.add_function("c", 0);
    if (chain) sig = expand_with_truth_constants(sig, chain);
  }

  Term term(std::mt19937& rng, int depth) const {
    int pick = std::uniform_int_distribution<int>(0, depth > 0 ? 4 : 3)(rng);
    if (pick < 3) return Term::var(vars[pick]);
    if (pick == 3) return Term::apply("c");
    return Term::apply("f", {term(rng, depth - 1)});
  }

  Formula formula(std::mt19937& rng, int depth) const {
    int pick = std::uniform_int_distribution<int>(0, depth > 0 ? 12 : 4)(rng);
    switch (pick) {
      case 0: return Formula::atom("P", {term(rng, 1)});
      case 1: return Formula::atom("R", {term(rng, 1), term(rng, 1)});
      case 2: return Formula::equal(term(rng, 1), term(rng, 1));
      case 3: return Formula::bottom();
      case 4:
        if (chain) {
          int e = std::uniform_int_distribution<int>(0, chain->size() - 1)(rng);
          return Formula::truth(chain, e);
        }
        return Formula::top();
      case 5: return Formula::negation(formula(rng, depth - 1));
      case 6: return Formula::forall(vars[rng() % 3], formula(rng, depth - 1));
      case 7: return Formula::exists(vars[rng() % 3], formula(rng, depth - 1));
      default: {
        static constexpr Connective ops[] = {Connective::Strong, Connective::Meet,
                                             Connective::Join, Connective::Implies,
                                             Connective::Iff};
        return Formula::binary(ops[pick - 8], formula(rng, depth - 1),
                               formula(rng, depth - 1));
      }
    }
  }
};

}  // namespace gradedmt::testing
