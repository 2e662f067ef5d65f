#pragma once

// Expansions by domain constants, diagrams, and the diagram test for
// embeddings.

#include <optional>
#include <string>
#include <vector>

#include "gradedmt/budget.hh"
#include "gradedmt/morphisms.hh"
#include "gradedmt/structure.hh"
#include "gradedmt/syntax.hh"

namespace gradedmt {

// S with a constant c_m interpreted as m for every element. Throws
// SignatureError if a name is taken.
Structure expansion_sharp(const Structure& s);

enum class DiagramKind { Diag, ElDiag };

const char* diagram_kind_name(DiagramKind k);

struct DiagramBounds {
  int depth = 0;      // connective depth (Diag) or formula depth (ElDiag)
  int variables = 0;  // ElDiag variable pool; 0 uses max(depth, 1)
};

// Each entry stands for the sentence `sentence <-> val(value)`.
struct DiagramEntry {
  Formula sentence;
  Elem value = 0;
};

struct Diagram {
  DiagramKind kind = DiagramKind::Diag;
  DiagramBounds bounds;
  ChainPtr chain;
  Signature signature;  // the expanded language
  std::vector<DiagramEntry> entries;
};

// All sentences of the expanded language within the bounds, quantifier-free
// for Diag, without semantic merging, with their values in S#. The truth
// constants 0 and 1 on their own are left out. Needs a relational-plus-
// constants signature.
Diagram build_diagram(const Structure& s, DiagramKind kind, DiagramBounds bounds,
                      Budget& budget);

struct DiagramCheck {
  bool ok = true;
  std::optional<std::size_t> failing;
  Elem found = 0;  // value of the failing sentence
};

// Every entry takes its recorded value. Throws PreconditionError unless
// `t` interprets the diagram's language over the same chain.
DiagramCheck models_diagram(const Structure& t, const Diagram& d);

// One "sentence <-> val(label)" line per entry.
std::string render_diagram(const Diagram& d);

struct DiagramEquivalence {
  bool diagram_side = false;
  bool embedding_side = false;
  bool agree() const { return diagram_side == embedding_side; }
  std::vector<int> interpretation;     // first c_m assignment modelling it
  std::optional<StructureMap> embedding;
};

// diagram_side: some interpretation of the constants in T models the
// bounded diagram of S (all |T|^|S| tried). embedding_side: some strong
// embedding <Id, g> exists, elementary to the bound for ElDiag.
DiagramEquivalence diagram_embedding_equivalence(const Structure& s,
                                                 const Structure& t,
                                                 DiagramKind kind,
                                                 DiagramBounds bounds,
                                                 Budget& budget);
// Same, with the diagram of S already built.
DiagramEquivalence diagram_embedding_equivalence(const Structure& s,
                                                 const Diagram& diagram,
                                                 const Structure& t,
                                                 Budget& budget);

}  // namespace gradedmt
