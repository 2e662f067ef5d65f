#pragma once

// Concrete syntax for formulas and theories.
//
//   formula := 'forall' var+ '.' formula | 'exists' var+ '.' formula | iff
//   iff     := imp ('<->' imp)*
//   imp     := join ('->' imp)?
//   join    := meet ('\/' meet)*
//   meet    := strong ('/\' strong)*
//   strong  := unary ('&' unary)*
//   unary   := 'not' unary | quantified | primary
//   primary := '(' formula ')' | 'val(' LABEL ')' | term '~' term
//            | PRED | PRED '(' term (',' term)* ')'
//
// A quantifier scopes to the end of the enclosing formula.

#include <string>
#include <string_view>
#include <vector>

#include "gradedmt/error.hh"
#include "gradedmt/syntax.hh"

namespace gradedmt {

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 1;
};

class ParseError : public FormatError {
 public:
  ParseError(const std::string& what, SourceSpan span)
      : FormatError(what), span_(span) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

Formula parse_formula(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig);

// Symbols applied to arguments in `text`. An application inside the
// arguments of another one or next to '~' is a function, any other is a
// predicate. Bare identifiers are read as variables.
Signature infer_signature(std::string_view text);

std::string render_term(const Term& t);
std::string render_formula(const Formula& f);

// Newline-separated formulas; '#' starts a comment. Errors name the line.
std::vector<Formula> parse_theory(std::string_view text, const Signature& sig);
std::string render_theory(const std::vector<Formula>& theory);

}  // namespace gradedmt
