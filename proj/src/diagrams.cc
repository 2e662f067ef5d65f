#include "gradedmt/diagrams.hh"

#include "gradedmt/error.hh"
#include "gradedmt/generator.hh"
#include "gradedmt/parser.hh"
#include "gradedmt/semantics.hh"

namespace gradedmt {

Structure expansion_sharp(const Structure& s) {
  std::map<std::string, int> constants;
  for (int d = 0; d < s.size(); ++d) constants[domain_constant_name(s.label(d))] = d;
  return s.with_constants(constants);
}

const char* diagram_kind_name(DiagramKind k) {
  return k == DiagramKind::Diag ? "Diag" : "ElDiag";
}

Diagram build_diagram(const Structure& s, DiagramKind kind, DiagramBounds bounds,
                      Budget& budget) {
  Diagram d;
  d.kind = kind;
  d.bounds = bounds;
  d.chain = s.chain_ptr();
  d.signature = expand_with_domain_constants(s.signature(), s.domain());
  Structure sharp = expansion_sharp(s);

  GeneratorOptions opt;
  opt.depth = bounds.depth;
  opt.semantic_dedup = false;
  if (kind == DiagramKind::Diag) {
    opt.variables = 0;
    opt.quantifiers = false;
  } else {
    opt.variables = bounds.variables > 0 ? bounds.variables : std::max(bounds.depth, 1);
    d.bounds.variables = opt.variables;
  }
  FormulaEnumerator gen({World{&sharp, {}}}, d.signature, opt, budget);
  gen.run([&](const FormulaClass& c) {
    if (c.free_mask != 0) return true;
    if (c.formula.kind() == Formula::Kind::Constant) return true;
    budget.charge(1, "diagram entries");
    d.entries.push_back({c.formula, c.values[0]});
    return true;
  });
  return d;
}

DiagramCheck models_diagram(const Structure& t, const Diagram& d) {
  if (!(t.chain() == *d.chain))
    throw PreconditionError("structure and diagram use different chains");
  for (const auto& [name, arity] : d.signature.functions())
    if (!t.function(name))
      throw PreconditionError("structure does not interpret '" + name + "'");
  DiagramCheck out;
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    Elem v = eval_formula(d.entries[i].sentence, t);
    if (v != d.entries[i].value) {
      out.ok = false;
      out.failing = i;
      out.found = v;
      break;
    }
  }
  return out;
}

std::string render_diagram(const Diagram& d) {
  std::string out;
  for (const auto& e : d.entries) {
    std::string s = render_formula(e.sentence);
    if (e.sentence.kind() == Formula::Kind::Binary) s = "(" + s + ")";
    out += s + " <-> val(" + d.chain->label(e.value) + ")\n";
  }
  return out;
}

namespace {

// Whether T with c_m interpreted by `interp` agrees with S# on every
// generated sentence within the bounds.
bool agrees_elementarily(const Structure& s, const Structure& t,
                         const std::vector<int>& interp, const DiagramBounds& b,
                         Budget& budget) {
  GeneratorOptions opt;
  opt.depth = b.depth;
  opt.variables = b.variables > 0 ? b.variables : std::max(b.depth, 1);
  for (const auto& l : s.domain()) opt.param_names.push_back(domain_constant_name(l));
  std::vector<int> ids(s.size());
  for (int i = 0; i < s.size(); ++i) ids[i] = i;
  FormulaEnumerator gen({World{&s, ids}, World{&t, interp}}, s.signature(), opt, budget);
  const auto& layout = gen.layout();
  bool ok = true;
  gen.run([&](const FormulaClass& c) {
    if (c.free_mask != 0) return true;
    ok = c.values[layout.offset(0)] == c.values[layout.offset(1)];
    return ok;
  });
  return ok;
}

}  // namespace

DiagramEquivalence diagram_embedding_equivalence(const Structure& s,
                                                 const Diagram& diagram,
                                                 const Structure& t,
                                                 Budget& budget) {
  DiagramEquivalence out;
  std::vector<std::string> names;
  for (const auto& l : s.domain()) names.push_back(domain_constant_name(l));

  TupleCounter interp(s.size(), t.size());
  do {
    budget.charge(1, "diagram interpretations");
    bool models;
    if (diagram.kind == DiagramKind::Diag) {
      std::map<std::string, int> consts;
      for (int i = 0; i < s.size(); ++i) consts[names[i]] = interp.current()[i];
      models = models_diagram(t.with_constants(consts), diagram).ok;
    } else {
      models = agrees_elementarily(s, t, interp.current(), diagram.bounds, budget);
    }
    if (models) {
      out.diagram_side = true;
      out.interpretation = interp.current();
      break;
    }
  } while (interp.next());

  MapSearch search{true, true, {}};
  for_each_strong_map(s, t, search, budget, [&](const StructureMap& m) {
    if (diagram.kind == DiagramKind::ElDiag) {
      const DiagramBounds& b = diagram.bounds;
      const int vars = s.size() + (b.variables > 0 ? b.variables : std::max(b.depth, 1));
      auto r = is_elementary_up_to_depth(m, s, t, b.depth, s.signature(),
                                         budget, vars);
      if (!r.ok) return true;
    }
    out.embedding_side = true;
    out.embedding = m;
    return false;
  });
  return out;
}

DiagramEquivalence diagram_embedding_equivalence(const Structure& s,
                                                 const Structure& t,
                                                 DiagramKind kind,
                                                 DiagramBounds bounds,
                                                 Budget& budget) {
  Diagram d;
  if (kind == DiagramKind::Diag) {
    d = build_diagram(s, kind, bounds, budget);
  } else {
    d.kind = kind;
    d.bounds = bounds;
    d.chain = s.chain_ptr();
  }
  return diagram_embedding_equivalence(s, d, t, budget);
}

}  // namespace gradedmt
