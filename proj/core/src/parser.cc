#include <cctype>
#include <optional>
#include <utility>

#include "hexp/folang.h"

namespace hexp {

ParseError::ParseError(const std::string& message, std::size_t position)
    : Error("parse error at " + std::to_string(position) + ": " + message), position_(position) {}

namespace {

enum class Tok { kIdent, kNumeral, kSymbol, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::kIdent, std::string(s.substr(start, i - start)), start});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i - start > 18) throw ParseError("numeral too long", start);
      out.push_back({Tok::kNumeral, std::string(s.substr(start, i - start)), start});
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Tok::kSymbol, "->", start});
      i += 2;
    } else if (std::string_view("().,=!&|+-*").find(c) != std::string_view::npos) {
      out.push_back({Tok::kSymbol, std::string(1, c), start});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::kEnd, "", s.size()});
  return out;
}

bool is_keyword(const std::string& s) { return s == "exists" || s == "forall"; }

// Thrown for errors that backtracking cannot fix (unknown symbols, arity).
struct SemanticFailure {
  ParseError error;
};

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : tokens_(tokenize(text)), sig_(sig) {}

  Formula parse_all() {
    try {
      Formula f = formula();
      if (peek().kind != Tok::kEnd) fail("unexpected '" + peek().text + "'");
      return f;
    } catch (SemanticFailure& s) {
      throw s.error;
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at_symbol(std::string_view s) const {
    return peek().kind == Tok::kSymbol && peek().text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }
  [[noreturn]] void semantic(const std::string& msg, std::size_t pos) const {
    throw SemanticFailure{ParseError(msg, pos)};
  }
  void expect(std::string_view s) {
    if (!at_symbol(s)) {
      fail("expected '" + std::string(s) + "' but found '" +
           (peek().kind == Tok::kEnd ? std::string("end of input") : peek().text) + "'");
    }
    ++pos_;
  }

  Formula formula() {
    if (peek().kind == Tok::kIdent && is_keyword(peek().text)) {
      const bool exists = peek().text == "exists";
      ++pos_;
      if (peek().kind != Tok::kIdent || is_keyword(peek().text)) fail("expected a variable after quantifier");
      if (sig_.function_index(peek().text) || sig_.relation_index(peek().text))
        semantic("cannot quantify over symbol '" + peek().text + "'", peek().pos);
      std::string var = peek().text;
      ++pos_;
      expect(".");
      Formula body = formula();
      return exists ? Formula::exists(std::move(var), std::move(body))
                    : Formula::forall(std::move(var), std::move(body));
    }
    return impl();
  }

  Formula impl() {
    Formula lhs = disj();
    if (at_symbol("->")) {
      ++pos_;
      return Formula::implies(std::move(lhs), impl());
    }
    return lhs;
  }

  Formula disj() {
    Formula f = conj();
    while (at_symbol("|")) {
      ++pos_;
      f = Formula::disj(std::move(f), conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = neg();
    while (at_symbol("&")) {
      ++pos_;
      f = Formula::conj(std::move(f), neg());
    }
    return f;
  }

  // A quantifier in operand position scopes as far right as possible.
  Formula neg() {
    if (at_symbol("!")) {
      ++pos_;
      return Formula::negation(neg());
    }
    if (peek().kind == Tok::kIdent && is_keyword(peek().text)) return formula();
    return atom();
  }

  Formula atom() {
    if (peek().kind == Tok::kIdent && sig_.relation_index(peek().text) && peek(1).kind == Tok::kSymbol &&
        peek(1).text == "(") {
      const Token name = peek();
      pos_ += 2;
      std::vector<Term> args = term_list();
      expect(")");
      const int arity = sig_.relations()[*sig_.relation_index(name.text)].arity;
      if (static_cast<int>(args.size()) != arity)
        semantic("relation '" + name.text + "' expects " + std::to_string(arity) + " arguments", name.pos);
      return Formula::rel(name.text, std::move(args));
    }
    const std::size_t save = pos_;
    std::optional<ParseError> equation_error;
    try {
      Term lhs = term();
      expect("=");
      Term rhs = term();
      return Formula::eq(std::move(lhs), std::move(rhs));
    } catch (ParseError& e) {
      equation_error = e;
    }
    pos_ = save;
    if (!at_symbol("(")) throw *equation_error;
    try {
      ++pos_;
      Formula f = formula();
      expect(")");
      return f;
    } catch (ParseError& e) {
      throw e.position() >= equation_error->position() ? e : *equation_error;
    }
  }

  std::vector<Term> term_list() {
    std::vector<Term> args;
    args.push_back(term());
    while (at_symbol(",")) {
      ++pos_;
      args.push_back(term());
    }
    return args;
  }

  Term infix(const std::string& op, Term a, Term b, std::size_t pos) {
    auto idx = sig_.function_index(op);
    if (!idx) semantic("unknown function symbol '" + op + "'", pos);
    if (sig_.functions()[*idx].arity != 2) semantic("'" + op + "' is not binary", pos);
    return Term::apply(op, {std::move(a), std::move(b)});
  }

  Term term() {
    Term t = factor();
    while (at_symbol("+") || at_symbol("-")) {
      const Token op = peek();
      ++pos_;
      t = infix(op.text, std::move(t), factor(), op.pos);
    }
    return t;
  }

  Term factor() {
    Term t = prim();
    while (at_symbol("*")) {
      const Token op = peek();
      ++pos_;
      t = infix(op.text, std::move(t), prim(), op.pos);
    }
    return t;
  }

  Term prim() {
    const Token tok = peek();
    if (tok.kind == Tok::kNumeral) {
      ++pos_;
      return Term::numeral(std::stoull(tok.text));
    }
    if (at_symbol("(")) {
      ++pos_;
      Term t = term();
      expect(")");
      return t;
    }
    if (tok.kind != Tok::kIdent || is_keyword(tok.text)) fail("expected a term");
    ++pos_;
    if (sig_.relation_index(tok.text)) semantic("relation '" + tok.text + "' used as a term", tok.pos);
    const auto fn = sig_.function_index(tok.text);
    if (at_symbol("(")) {
      if (!fn) semantic("unknown function symbol '" + tok.text + "'", tok.pos);
      ++pos_;
      std::vector<Term> args = term_list();
      expect(")");
      const int arity = sig_.functions()[*fn].arity;
      if (static_cast<int>(args.size()) != arity)
        semantic("function '" + tok.text + "' expects " + std::to_string(arity) + " arguments", tok.pos);
      return Term::apply(tok.text, std::move(args));
    }
    if (fn) {
      if (sig_.functions()[*fn].arity != 0)
        semantic("function '" + tok.text + "' needs arguments", tok.pos);
      return Term::apply(tok.text, {});
    }
    return Term::var(tok.text);
  }

  std::vector<Token> tokens_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_bare_formula(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  return p.parse_all();
}

ParamFormula parse_formula(std::string_view text, const Signature& sig, std::string object,
                           std::vector<std::string> params) {
  ParamFormula pf;
  pf.formula = parse_bare_formula(text, sig);
  pf.object = std::move(object);
  pf.params = std::move(params);
  pf.source = std::string(text);

  std::set<std::string> declared(pf.params.begin(), pf.params.end());
  if (declared.size() != pf.params.size()) throw ParseError("duplicate parameter variable", 0);
  if (declared.count(pf.object)) throw ParseError("object variable repeated among parameters", 0);
  declared.insert(pf.object);
  const std::set<std::string> free = free_variables(pf.formula);
  if (free != declared) {
    std::string msg = "free-variable mismatch: formula has {";
    bool first = true;
    for (const auto& v : free) {
      msg += (first ? "" : ",") + v;
      first = false;
    }
    msg += "} but {";
    first = true;
    for (const auto& v : declared) {
      msg += (first ? "" : ",") + v;
      first = false;
    }
    throw ParseError(msg + "} was declared", 0);
  }
  return pf;
}

ParamFormula parse_formula(std::string_view text, const Signature& sig) {
  const Formula f = parse_bare_formula(text, sig);
  std::vector<std::string> params;
  for (const auto& v : free_variables(f))
    if (v != "x") params.push_back(v);
  return parse_formula(text, sig, "x", std::move(params));
}

}  // namespace hexp
