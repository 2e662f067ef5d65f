#pragma once

// File formats. Algebras, structures, signatures, chain files and amalgam
// instances are JSON; theories are text with one formula per line.
//
// Algebra:   {"name"?, "elements": [labels], "star": [[i]], "implies"?: [[i]],
//             "extra_ops"?: {op: {"arity": n, "table": [i]}}}
// Structure: {"algebra": path or inline algebra, "domain": [labels],
//             "predicates"?: {P: {"arity": n, "table": {"a,b": label}}},
//             "functions"?:  {f: {"arity": n, "table": {"a,b": label}}}}
//            A nullary entry uses the key "".
// Signature: {"predicates"?: {P: n}, "functions"?: {f: n},
//             "algebra"?: path or inline algebra}
//            The algebra, when given, makes its labels usable as val(LABEL).
// Chain:     [structure paths]
// Amalgam:   {"name"?, "common"?: path, "left": path, "right": path,
//             "generators"?: [labels]}
//
// Relative paths inside a file resolve against that file's directory.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "gradedmt/chain.hh"
#include "gradedmt/preservation.hh"
#include "gradedmt/structure.hh"
#include "gradedmt/syntax.hh"
#include "gradedmt/unions.hh"

namespace gradedmt::io {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Shares one ChainPtr between files that name the same algebra file.
class AlgebraCache {
 public:
  ChainPtr load(const fs::path& path);

 private:
  std::map<fs::path, ChainPtr> chains_;
};

Json read_json(const fs::path& path);
std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

FiniteChain algebra_from_json(const Json& j, const std::string& where = "algebra");
Json algebra_to_json(const FiniteChain& chain);
ChainPtr load_algebra(const fs::path& path);

Structure structure_from_json(const Json& j, const fs::path& base, AlgebraCache& cache,
                              const std::string& where = "structure");
// The algebra is written inline unless `algebra_path` is given.
Json structure_to_json(const Structure& s, const std::string& algebra_path = {});
Structure load_structure(const fs::path& path, AlgebraCache& cache);
Structure load_structure(const fs::path& path);
void save_structure(const fs::path& path, const Structure& s,
                    const std::string& algebra_path = {});

Signature signature_from_json(const Json& j, const fs::path& base, AlgebraCache& cache);
Signature load_signature(const fs::path& path, AlgebraCache& cache);
Signature load_signature(const fs::path& path);

std::vector<Formula> load_theory(const fs::path& path, const Signature& sig);

std::vector<Structure> load_chain_file(const fs::path& path, AlgebraCache& cache);

AmalgamInstance load_amalgam_instance(const fs::path& path, AlgebraCache& cache);

}  // namespace gradedmt::io
