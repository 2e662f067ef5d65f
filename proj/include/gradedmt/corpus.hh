#pragma once

// Seeded random chains, structures and chains of structures.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gradedmt/chain.hh"
#include "gradedmt/structure.hh"
#include "gradedmt/syntax.hh"

namespace gradedmt {

// Draws below are taken as rng() % n so that streams do not depend on the
// standard library's distributions.
using Rng = std::mt19937_64;

// Generator for instance `index` of a run seeded with `seed`.
Rng instance_rng(std::uint64_t seed, std::uint64_t index);

// Every MTL-chain on k elements (star tables up to nothing but the table),
// in lexicographic order of the star table. Labels are "0", "a1", ..., "1".
std::vector<FiniteChain> all_mtl_chains(int k);

// A uniformly drawn member of all_mtl_chains(k), memoized per k.
ChainPtr random_mtl_chain(int k, Rng& rng);

// Random tables for every symbol of `sig` (no truth constants) over the
// domain labels.
Structure random_structure(const Signature& sig, ChainPtr chain,
                           std::vector<std::string> domain, Rng& rng);

// `s` plus fresh elements; old entries kept, new entries random.
Structure random_extension(const Structure& s, const std::vector<std::string>& fresh,
                           Rng& rng);

// R/2 and P/1.
Signature suite_signature();

}  // namespace gradedmt
