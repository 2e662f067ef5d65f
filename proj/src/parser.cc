#include "gradedmt/parser.hh"

#include <cctype>
#include <map>
#include <sstream>

namespace gradedmt {

namespace {

enum class Tok {
  Ident, LParen, RParen, Comma, Dot, Tilde, Amp, Meet, Join, Arrow, Iff,
  Forall, Exists, Not, Val, End
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : src_(s) {}

  Token next() {
    skip_space();
    SourceSpan sp = here();
    if (pos_ >= src_.size()) return {Tok::End, "", sp};
    char c = src_[pos_];
    auto single = [&](Tok k, std::size_t len) {
      std::string t(src_.substr(pos_, len));
      advance(len);
      sp.end = pos_;
      return Token{k, t, sp};
    };
    if (c == '(') return single(Tok::LParen, 1);
    if (c == ')') return single(Tok::RParen, 1);
    if (c == ',') return single(Tok::Comma, 1);
    if (c == '.') return single(Tok::Dot, 1);
    if (c == '~') return single(Tok::Tilde, 1);
    if (c == '&') return single(Tok::Amp, 1);
    if (starts("/\\")) return single(Tok::Meet, 2);
    if (starts("\\/")) return single(Tok::Join, 2);
    if (starts("->")) return single(Tok::Arrow, 2);
    if (starts("<->")) return single(Tok::Iff, 3);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_' || src_[pos_] == '\''))
        advance(1);
      std::string word(src_.substr(b, pos_ - b));
      sp.end = pos_;
      Tok k = Tok::Ident;
      if (word == "forall") k = Tok::Forall;
      else if (word == "exists") k = Tok::Exists;
      else if (word == "not") k = Tok::Not;
      else if (word == "val") k = Tok::Val;
      return {k, word, sp};
    }
    throw ParseError(location(sp) + ": unexpected character '" +
                         std::string(1, c) + "'",
                     sp);
  }

  // Raw label text up to the next ')', trimmed.
  Token raw_label() {
    SourceSpan sp = here();
    std::size_t b = pos_;
    while (pos_ < src_.size() && src_[pos_] != ')') advance(1);
    if (pos_ >= src_.size())
      throw ParseError(location(sp) + ": unterminated val(...)", sp);
    std::string_view raw = src_.substr(b, pos_ - b);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front())))
      raw.remove_prefix(1);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back())))
      raw.remove_suffix(1);
    sp.end = pos_;
    return {Tok::Ident, std::string(raw), sp};
  }

  static std::string location(const SourceSpan& sp) {
    return std::to_string(sp.line) + ":" + std::to_string(sp.column);
  }

 private:
  bool starts(std::string_view p) const { return src_.substr(pos_, p.size()) == p; }
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      advance(1);
  }
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  SourceSpan here() const { return {pos_, pos_, line_, col_}; }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : lex_(text), sig_(sig) {
    tok_ = lex_.next();
  }

  Formula formula() { return iff(); }

  Term whole_term() {
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

  void finish() { expect(Tok::End, "end of input"); }

 private:
  [[noreturn]] void fail(const std::string& msg, const SourceSpan& sp) {
    throw ParseError(Lexer::location(sp) + ": " + msg, sp);
  }

  Token take() {
    Token t = tok_;
    tok_ = lex_.next();
    return t;
  }

  Token expect(Tok k, const char* what) {
    if (tok_.kind != k)
      fail(std::string("expected ") + what + ", found '" +
               (tok_.kind == Tok::End ? std::string("end of input") : tok_.text) +
               "'",
           tok_.span);
    return take();
  }

  Formula iff() {
    Formula l = imp();
    while (tok_.kind == Tok::Iff) {
      take();
      l = Formula::binary(Connective::Iff, l, imp());
    }
    return l;
  }

  Formula imp() {
    Formula l = join();
    if (tok_.kind == Tok::Arrow) {
      take();
      return Formula::binary(Connective::Implies, l, imp());
    }
    return l;
  }

  Formula join() {
    Formula l = meet();
    while (tok_.kind == Tok::Join) {
      take();
      l = Formula::binary(Connective::Join, l, meet());
    }
    return l;
  }

  Formula meet() {
    Formula l = strong();
    while (tok_.kind == Tok::Meet) {
      take();
      l = Formula::binary(Connective::Meet, l, strong());
    }
    return l;
  }

  Formula strong() {
    Formula l = unary();
    while (tok_.kind == Tok::Amp) {
      take();
      l = Formula::binary(Connective::Strong, l, unary());
    }
    return l;
  }

  Formula unary() {
    if (tok_.kind == Tok::Not) {
      take();
      return Formula::negation(unary());
    }
    if (tok_.kind == Tok::Forall || tok_.kind == Tok::Exists) {
      bool universal = tok_.kind == Tok::Forall;
      take();
      std::vector<std::string> vars;
      while (tok_.kind == Tok::Ident) {
        Token v = take();
        if (sig_.function_arity(v.text) || sig_.predicate_arity(v.text))
          fail("'" + v.text + "' is a symbol of the signature, not a variable",
               v.span);
        vars.push_back(v.text);
      }
      if (vars.empty()) fail("quantifier needs at least one variable", tok_.span);
      expect(Tok::Dot, "'.'");
      Formula body = iff();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = universal ? Formula::forall(*it, body) : Formula::exists(*it, body);
      return body;
    }
    return primary();
  }

  Formula primary() {
    if (tok_.kind == Tok::LParen) {
      take();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (tok_.kind == Tok::Val) {
      take();
      if (tok_.kind != Tok::LParen) fail("expected '(' after val", tok_.span);
      Token label = lex_.raw_label();
      tok_ = lex_.next();
      expect(Tok::RParen, "')'");
      return truth_constant(label);
    }
    if (tok_.kind == Tok::Ident) {
      if (auto ar = sig_.predicate_arity(tok_.text)) {
        Token name = take();
        std::vector<Term> args;
        if (tok_.kind == Tok::LParen) {
          take();
          args.push_back(term());
          while (tok_.kind == Tok::Comma) {
            take();
            args.push_back(term());
          }
          expect(Tok::RParen, "')'");
        }
        if (static_cast<int>(args.size()) != *ar)
          fail("predicate '" + name.text + "' expects " + std::to_string(*ar) +
                   " arguments, got " + std::to_string(args.size()),
               name.span);
        return Formula::atom(name.text, std::move(args));
      }
      Term lhs = term();
      expect(Tok::Tilde, "'~'");
      Term rhs = term();
      return Formula::equal(std::move(lhs), std::move(rhs));
    }
    fail("expected a formula, found '" +
             (tok_.kind == Tok::End ? std::string("end of input") : tok_.text) +
             "'",
         tok_.span);
  }

  Formula truth_constant(const Token& label) {
    if (const auto& chain = sig_.truth_chain()) {
      if (auto e = chain->find(label.text)) return Formula::truth(chain, *e);
    }
    if (label.text == "0") return Formula::bottom();
    if (label.text == "1") return Formula::top();
    fail("unknown truth constant val(" + label.text + ")", label.span);
  }

  Term term() {
    if (tok_.kind != Tok::Ident) fail("expected a term", tok_.span);
    Token name = take();
    auto ar = sig_.function_arity(name.text);
    if (!ar) {
      if (tok_.kind == Tok::LParen)
        fail("unknown function symbol '" + name.text + "'", name.span);
      if (sig_.predicate_arity(name.text))
        fail("predicate '" + name.text + "' used as a term", name.span);
      return Term::var(name.text);
    }
    std::vector<Term> args;
    if (tok_.kind == Tok::LParen) {
      take();
      args.push_back(term());
      while (tok_.kind == Tok::Comma) {
        take();
        args.push_back(term());
      }
      expect(Tok::RParen, "')'");
    }
    if (static_cast<int>(args.size()) != *ar)
      fail("function '" + name.text + "' expects " + std::to_string(*ar) +
               " arguments, got " + std::to_string(args.size()),
           name.span);
    return Term::apply(name.text, std::move(args));
  }

  Lexer lex_;
  const Signature& sig_;
  Token tok_;
};

void render_into(const Formula& f, bool operand, std::string& out);

void render_quantifier(const Formula& f, std::string& out) {
  out += f.kind() == Formula::Kind::Forall ? "forall" : "exists";
  const Formula* cur = &f;
  while (cur->kind() == f.kind()) {
    out += ' ';
    out += cur->variable();
    cur = &cur->body();
  }
  out += ". ";
  render_into(*cur, true, out);
}

// `operand` marks positions inside a larger formula, where binaries and
// quantifiers need parentheses.
void render_into(const Formula& f, bool operand, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      out += f.predicate();
      if (!f.terms().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          if (i) out += ',';
          out += render_term(f.terms()[i]);
        }
        out += ')';
      }
      return;
    case K::Equal:
      out += render_term(f.terms()[0]) + " ~ " + render_term(f.terms()[1]);
      return;
    case K::Constant:
      switch (f.const_kind()) {
        case Formula::ConstKind::Bottom: out += "val(0)"; return;
        case Formula::ConstKind::Top: out += "val(1)"; return;
        case Formula::ConstKind::Element:
          out += "val(" + f.chain()->label(f.truth_value()) + ")";
          return;
      }
      return;
    case K::Not: {
      out += "not ";
      const Formula& b = f.body();
      bool wrap = b.kind() == K::Equal || b.is_quantifier();
      if (wrap) out += '(';
      render_into(b, !wrap, out);
      if (wrap) out += ')';
      return;
    }
    case K::Binary:
      if (operand) out += '(';
      render_into(f.left(), true, out);
      out += ' ';
      out += connective_symbol(f.connective());
      out += ' ';
      render_into(f.right(), true, out);
      if (operand) out += ')';
      return;
    case K::Forall:
    case K::Exists:
      if (operand) out += '(';
      render_quantifier(f, out);
      if (operand) out += ')';
      return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Formula f = p.formula();
  p.finish();
  return f;
}

Term parse_term(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  return p.whole_term();
}

Signature infer_signature(std::string_view text) {
  Lexer lex(text);
  std::vector<Token> toks;
  for (Token t = lex.next(); t.kind != Tok::End; t = lex.next()) {
    toks.push_back(t);
    if (t.kind == Tok::Val) {
      toks.push_back(lex.next());
      if (toks.back().kind == Tok::LParen) lex.raw_label();
    }
  }
  std::map<std::string, int> preds, funcs;
  auto record = [](std::map<std::string, int>& into, const Token& name, int arity) {
    auto [it, fresh] = into.emplace(name.text, arity);
    if (!fresh && it->second != arity)
      throw ParseError("'" + name.text + "' is used with different arities", name.span);
  };
  // One entry per open parenthesis: whether it holds the arguments of a symbol.
  std::vector<bool> open;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind == Tok::LParen) {
      open.push_back(i > 0 && toks[i - 1].kind == Tok::Ident);
      continue;
    }
    if (toks[i].kind == Tok::RParen) {
      if (!open.empty()) open.pop_back();
      continue;
    }
    if (toks[i].kind != Tok::Ident || i + 1 >= toks.size() ||
        toks[i + 1].kind != Tok::LParen)
      continue;
    int depth = 0, arity = 1;
    std::size_t j = i + 1;
    for (; j < toks.size(); ++j) {
      if (toks[j].kind == Tok::LParen) ++depth;
      else if (toks[j].kind == Tok::RParen && --depth == 0) break;
      else if (toks[j].kind == Tok::Comma && depth == 1) ++arity;
    }
    bool in_term = (!open.empty() && open.back()) ||
                   (i > 0 && toks[i - 1].kind == Tok::Tilde) ||
                   (j + 1 < toks.size() && toks[j + 1].kind == Tok::Tilde);
    record(in_term ? funcs : preds, toks[i], arity);
  }
  Signature sig;
  for (const auto& [name, arity] : preds) {
    if (funcs.contains(name))
      throw ParseError("'" + name + "' is used as a predicate and a function", {});
    sig.add_predicate(name, arity);
  }
  for (const auto& [name, arity] : funcs) sig.add_function(name, arity);
  return sig;
}

std::string render_term(const Term& t) {
  if (t.is_variable() || t.args.empty()) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ',';
    out += render_term(t.args[i]);
  }
  return out + ")";
}

std::string render_formula(const Formula& f) {
  std::string out;
  render_into(f, false, out);
  return out;
}

std::vector<Formula> parse_theory(std::string_view text, const Signature& sig) {
  std::vector<Formula> out;
  std::size_t start = 0;
  int line = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view row = text.substr(
        start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    ++line;
    if (auto hash = row.find('#'); hash != std::string_view::npos)
      row = row.substr(0, hash);
    bool blank = true;
    for (char c : row)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (!blank) {
      try {
        out.push_back(parse_formula(row, sig));
      } catch (const ParseError& e) {
        SourceSpan sp = e.span();
        sp.line = line;
        throw ParseError("line " + std::to_string(line) + ": " + e.what(), sp);
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

std::string render_theory(const std::vector<Formula>& theory) {
  std::string out;
  for (const auto& f : theory) out += render_formula(f) + "\n";
  return out;
}

}  // namespace gradedmt
