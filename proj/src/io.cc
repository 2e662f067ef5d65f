#include "gradedmt/io.hh"

#include <fstream>
#include <sstream>

#include "gradedmt/error.hh"
#include "gradedmt/parser.hh"

namespace gradedmt::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw FormatError(where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

int as_index(const Json& j, int size, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an element index");
  int v = j.get<int>();
  if (v < 0 || v >= size) fail(where, "index " + std::to_string(v) + " out of range");
  return v;
}

std::vector<std::string> as_labels(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of labels");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(where + "/" + std::to_string(i), "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

int as_arity(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<int>() < 0) fail(where, "expected an arity >= 0");
  return j.get<int>();
}

Table2 square(const Json& j, int size, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    fail(where, "expected " + std::to_string(size) + " rows");
  Table2 t(size);
  for (int r = 0; r < size; ++r) {
    const std::string w = where + "/" + std::to_string(r);
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != size)
      fail(w, "expected " + std::to_string(size) + " entries");
    for (int c = 0; c < size; ++c)
      t[r].push_back(as_index(j[r][c], size, w + "/" + std::to_string(c)));
  }
  return t;
}

std::string tuple_key(const Structure& s, std::span<const int> args) {
  std::string key;
  for (std::size_t i = 0; i < args.size(); ++i) key += (i ? "," : "") + s.label(args[i]);
  return key;
}

std::vector<int> parse_key(const Structure& s, const std::string& key, int arity,
                           const std::string& where) {
  std::vector<int> args;
  if (arity == 0) {
    if (!key.empty()) fail(where, "nullary entry must use the key \"\"");
    return args;
  }
  std::stringstream in(key);
  std::string part;
  while (std::getline(in, part, ',')) {
    auto b = part.find_first_not_of(' '), e = part.find_last_not_of(' ');
    part = b == std::string::npos ? "" : part.substr(b, e - b + 1);
    auto d = s.find(part);
    if (!d) fail(where, "unknown domain element '" + part + "'");
    args.push_back(*d);
  }
  if (static_cast<int>(args.size()) != arity)
    fail(where, "key '" + key + "' does not have " + std::to_string(arity) + " arguments");
  return args;
}

ChainPtr algebra_ref(const Json& j, const fs::path& base, AlgebraCache& cache,
                     const std::string& where) {
  if (j.is_string()) return cache.load(base / j.get<std::string>());
  return std::make_shared<const FiniteChain>(algebra_from_json(j, where));
}

fs::path dir_of(const fs::path& p) { return p.parent_path(); }

}  // namespace

ChainPtr AlgebraCache::load(const fs::path& path) {
  fs::path key = fs::weakly_canonical(path);
  auto it = chains_.find(key);
  if (it != chains_.end()) return it->second;
  ChainPtr c = std::make_shared<const FiniteChain>(
      algebra_from_json(read_json(path), path.string()));
  chains_.emplace(key, c);
  return c;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path.string() + ": cannot write file");
  out << text;
}

Json read_json(const fs::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

FiniteChain algebra_from_json(const Json& j, const std::string& where) {
  ChainTables t;
  t.labels = as_labels(field(j, "elements", where), where + "/elements");
  const int n = static_cast<int>(t.labels.size());
  if (n < 2) fail(where + "/elements", "a chain needs at least two elements");
  t.star = square(field(j, "star", where), n, where + "/star");
  if (j.contains("implies")) t.implies = square(j["implies"], n, where + "/implies");
  if (j.contains("extra_ops")) {
    const Json& ops = j["extra_ops"];
    if (!ops.is_object()) fail(where + "/extra_ops", "expected an object");
    for (const auto& [name, op] : ops.items()) {
      const std::string w = where + "/extra_ops/" + name;
      ExtraOp e;
      e.arity = as_arity(field(op, "arity", w), w + "/arity");
      const Json& table = field(op, "table", w);
      std::size_t cells = 1;
      for (int a = 0; a < e.arity; ++a) cells *= n;
      if (!table.is_array() || table.size() != cells)
        fail(w + "/table", "expected " + std::to_string(cells) + " entries");
      for (std::size_t i = 0; i < cells; ++i)
        e.table.push_back(as_index(table[i], n, w + "/table/" + std::to_string(i)));
      t.extra_ops[name] = std::move(e);
    }
  }
  std::string name = j.contains("name") && j["name"].is_string()
                         ? j["name"].get<std::string>() : std::string{};
  try {
    return FiniteChain::from_tables(std::move(t), name);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

Json algebra_to_json(const FiniteChain& chain) {
  Json j;
  if (!chain.name().empty()) j["name"] = chain.name();
  j["elements"] = chain.labels();
  j["star"] = chain.star_table();
  j["implies"] = chain.implies_table();
  if (!chain.extra_ops().empty()) {
    Json ops = Json::object();
    for (const auto& [name, op] : chain.extra_ops())
      ops[name] = Json{{"arity", op.arity}, {"table", op.table}};
    j["extra_ops"] = ops;
  }
  return j;
}

ChainPtr load_algebra(const fs::path& path) {
  AlgebraCache cache;
  return cache.load(path);
}

Structure structure_from_json(const Json& j, const fs::path& base, AlgebraCache& cache,
                              const std::string& where) {
  ChainPtr chain = algebra_ref(field(j, "algebra", where), base, cache, where + "/algebra");
  Structure s(chain, as_labels(field(j, "domain", where), where + "/domain"));
  const int n = s.size();

  auto read_tables = [&](const char* kind, bool predicate) {
    if (!j.contains(kind)) return;
    const Json& all = j[kind];
    if (!all.is_object()) fail(where + "/" + kind, "expected an object");
    for (const auto& [name, entry] : all.items()) {
      const std::string w = where + "/" + kind + "/" + name;
      const int arity = as_arity(field(entry, "arity", w), w + "/arity");
      const Json& table = field(entry, "table", w);
      if (!table.is_object()) fail(w + "/table", "expected an object keyed by tuples");
      std::size_t cells = 1;
      for (int a = 0; a < arity; ++a) cells *= n;
      std::vector<int> values(cells, -1);
      for (const auto& [key, value] : table.items()) {
        const std::string wk = w + "/table/" + key;
        auto args = parse_key(s, key, arity, wk);
        if (!value.is_string()) fail(wk, "expected a label");
        const std::string label = value.get<std::string>();
        std::optional<int> v = predicate ? chain->find(label) : s.find(label);
        if (!v)
          fail(wk, std::string(predicate ? "unknown algebra element '"
                                         : "unknown domain element '") + label + "'");
        values[table_index(args, n)] = *v;
      }
      TupleCounter d(arity, n);
      do {
        if (values[table_index(d.current(), n)] < 0)
          fail(w + "/table", "missing entry for (" + tuple_key(s, d.current()) + ")");
      } while (d.next());
      if (predicate) s.set_predicate(name, {arity, std::move(values)});
      else s.set_function(name, {arity, std::move(values)});
    }
  };
  read_tables("predicates", true);
  read_tables("functions", false);
  return s;
}

Json structure_to_json(const Structure& s, const std::string& algebra_path) {
  Json j;
  j["algebra"] = algebra_path.empty() ? algebra_to_json(s.chain()) : Json(algebra_path);
  j["domain"] = s.domain();
  auto write = [&](const auto& tables, bool predicate) {
    Json out = Json::object();
    for (const auto& [name, t] : tables) {
      Json table = Json::object();
      TupleCounter d(t.arity, s.size());
      do {
        int v = t.values[table_index(d.current(), s.size())];
        table[tuple_key(s, d.current())] = predicate ? s.chain().label(v) : s.label(v);
      } while (d.next());
      out[name] = Json{{"arity", t.arity}, {"table", table}};
    }
    return out;
  };
  j["predicates"] = write(s.predicates(), true);
  if (!s.functions().empty()) j["functions"] = write(s.functions(), false);
  return j;
}

Structure load_structure(const fs::path& path, AlgebraCache& cache) {
  return structure_from_json(read_json(path), dir_of(path), cache, path.string());
}

Structure load_structure(const fs::path& path) {
  AlgebraCache cache;
  return load_structure(path, cache);
}

void save_structure(const fs::path& path, const Structure& s,
                    const std::string& algebra_path) {
  write_text(path, structure_to_json(s, algebra_path).dump(2) + "\n");
}

Signature signature_from_json(const Json& j, const fs::path& base, AlgebraCache& cache) {
  const std::string where = "signature";
  if (!j.is_object()) fail(where, "expected an object");
  Signature sig;
  for (const char* kind : {"predicates", "functions"}) {
    if (!j.contains(kind)) continue;
    if (!j[kind].is_object()) fail(where + "/" + kind, "expected an object");
    for (const auto& [name, arity] : j[kind].items()) {
      int a = as_arity(arity, where + "/" + kind + "/" + name);
      if (std::string(kind) == "predicates") sig.add_predicate(name, a);
      else sig.add_function(name, a);
    }
  }
  if (j.contains("algebra"))
    sig = expand_with_truth_constants(sig, algebra_ref(j["algebra"], base, cache,
                                                       where + "/algebra"));
  return sig;
}

Signature load_signature(const fs::path& path, AlgebraCache& cache) {
  try {
    return signature_from_json(read_json(path), dir_of(path), cache);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Signature load_signature(const fs::path& path) {
  AlgebraCache cache;
  return load_signature(path, cache);
}

std::vector<Formula> load_theory(const fs::path& path, const Signature& sig) {
  try {
    return parse_theory(read_text(path), sig);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.span());
  } catch (const SignatureError& e) {
    throw SignatureError(path.string() + ": " + e.what());
  }
}

std::vector<Structure> load_chain_file(const fs::path& path, AlgebraCache& cache) {
  Json j = read_json(path);
  if (!j.is_array() || j.empty()) fail(path.string(), "expected a non-empty list of paths");
  std::vector<Structure> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(path.string() + "/" + std::to_string(i), "expected a path");
    out.push_back(load_structure(dir_of(path) / j[i].get<std::string>(), cache));
  }
  return out;
}

AmalgamInstance load_amalgam_instance(const fs::path& path, AlgebraCache& cache) {
  Json j = read_json(path);
  const std::string where = path.string();
  const fs::path base = dir_of(path);
  auto structure_at = [&](const char* key) {
    const Json& v = field(j, key, where);
    if (!v.is_string()) fail(where + "/" + key, "expected a path");
    return load_structure(base / v.get<std::string>(), cache);
  };
  AmalgamInstance inst{
      j.contains("name") ? j["name"].get<std::string>() : path.stem().string(),
      std::nullopt, structure_at("left"), structure_at("right"), {}};
  if (j.contains("common") && !j["common"].is_null()) inst.common = structure_at("common");
  if (j.contains("generators"))
    inst.generators = as_labels(j["generators"], where + "/generators");
  validate_amalgam_instance(inst);
  return inst;
}

}  // namespace gradedmt::io
