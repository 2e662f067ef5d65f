#pragma once

// Small structures that recur in the bundled examples.

#include <string>
#include <vector>

#include "gradedmt/structure.hh"

namespace gradedmt::samples {

// Unary predicate `pred` with the same value everywhere.
Structure constant_predicate(ChainPtr chain, std::vector<std::string> domain,
                             const std::string& pred, Elem value);

// Crisp irreflexive complete graph on the given vertices, predicate R.
Structure complete_graph(ChainPtr chain, std::vector<std::string> vertices);

// Labels prefix0 .. prefix(n-1).
std::vector<std::string> numbered(const std::string& prefix, int n);

}  // namespace gradedmt::samples
