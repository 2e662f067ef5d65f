#pragma once

// Strong homomorphisms, embeddings, substructures and isomorphisms between
// finite structures, with exhaustive searches.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gradedmt/budget.hh"
#include "gradedmt/chain.hh"
#include "gradedmt/structure.hh"
#include "gradedmt/syntax.hh"

namespace gradedmt {

enum class MapKind { Strong, Embedding, Elementary };

const char* map_kind_name(MapKind k);

// A pair <f, g>: f between the chains, g between the domains (indices).
// The claimed kind is documentation only; every check recomputes it.
struct StructureMap {
  AlgebraMap f;
  std::vector<int> g;
  MapKind claim = MapKind::Strong;
  int depth = 0;  // for Elementary claims
};

StructureMap identity_map(const Structure& s);

// Second after first.
StructureMap compose(const StructureMap& first, const StructureMap& second);

// Function commutation and f(P_S(d)) = P_T(g(d)) on every tuple. Throws
// SignatureError when S and T interpret different symbols and FormatError
// when the maps do not fit the structures.
CheckResult is_strong_homomorphism(const StructureMap& m, const Structure& s,
                                   const Structure& t);
// Strong homomorphism with f and g injective.
CheckResult is_embedding(const StructureMap& m, const Structure& s,
                         const Structure& t);
// Embedding with f and g bijective.
CheckResult is_isomorphism(const StructureMap& m, const Structure& s,
                           const Structure& t);

struct ElementaryReport {
  bool ok = true;
  int depth = 0;
  int variables = 0;
  std::string reason;                // set when the map is not even strong
  std::optional<Formula> separating; // free variables x1..xv
  std::vector<int> tuple;            // source elements for x1..xv
  Elem source_value = 0;             // f applied to the value in S
  Elem target_value = 0;
};

// f(||phi(d)||_S) = ||phi(g(d))||_T for every generated formula of depth
// <= depth over `sig` and every tuple d. `variables` = 0 uses max(depth, 1).
ElementaryReport is_elementary_up_to_depth(const StructureMap& m,
                                           const Structure& s,
                                           const Structure& t, int depth,
                                           const Signature& sig, Budget& budget,
                                           int variables = 0);

struct SubstructureReport {
  bool ok = true;
  int clause = 0;  // 1 subalgebra, 2 domain, 3 functions, 4 predicates
  std::string detail;
};

// Checks, in order: S's chain is a subalgebra of T's (matched by label), S's
// domain labels are among T's, and function and predicate tables agree on
// S's elements.
SubstructureReport is_substructure(const Structure& s, const Structure& t);

// Structure on the given elements of T with restricted tables. Throws
// PreconditionError unless the set is closed under T's functions.
Structure induced_substructure(const Structure& t, const std::vector<int>& elements);

// Inclusion of an induced substructure, by label.
StructureMap inclusion_map(const Structure& s, const Structure& t);

// Substructures of T on every non-empty subset closed under the functions,
// subsets in increasing bitmask order (element i is bit i). With
// `with_subalgebras`, each is also visited over every subalgebra of T's
// chain that contains its predicate values, smallest first, after the one
// over T's chain. Returns false if `visit` stopped.
bool enumerate_substructures(const Structure& t,
                             const std::function<bool(const Structure&)>& visit,
                             bool with_subalgebras = false);

struct MapSearch {
  bool fix_f_identity = true;
  bool injective = true;
  // Per source element: required image, or -1.
  std::vector<int> fixed_g;
};

// Strong maps S -> T in lexicographic order of (f, g), the first source
// element most significant. Returns false if `visit` stopped.
bool for_each_strong_map(const Structure& s, const Structure& t,
                         const MapSearch& search, Budget& budget,
                         const std::function<bool(const StructureMap&)>& visit);

std::optional<StructureMap> search_strong_embedding(const Structure& s,
                                                    const Structure& t,
                                                    bool fix_f_identity,
                                                    Budget& budget);
std::optional<StructureMap> search_strong_homomorphism(const Structure& s,
                                                       const Structure& t,
                                                       bool fix_f_identity,
                                                       Budget& budget);

}  // namespace gradedmt
