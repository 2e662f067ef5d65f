#pragma once

// JSON and text renderings of library results for the command line.

#include <optional>
#include <string>

#include "gradedmt/diagrams.hh"
#include "gradedmt/io.hh"
#include "gradedmt/morphisms.hh"
#include "gradedmt/preservation.hh"
#include "gradedmt/semantics.hh"
#include "gradedmt/unions.hh"

namespace gradedmt::cli {

using io::Json;

Json formula_or_null(const std::optional<Formula>& f);
Json labels_of(const Structure& s, const std::vector<int>& elems);
Json map_json(const StructureMap& m, const Structure& s, const Structure& t);
std::string map_text(const StructureMap& m, const Structure& s, const Structure& t);

Json implies_json(const ImpliesReport& r, const Structure& left);
Json preservation_json(const PreservationReport& r);
Json tarski_vaught_json(const TarskiVaughtReport& r, const StructureChain& c);
Json counterexample_json(const CounterexampleReport& r);

}  // namespace gradedmt::cli
