#ifndef HEXP_FOLANG_H_
#define HEXP_FOLANG_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hexp/common.h"
#include "hexp/finitemodels.h"

namespace hexp {

struct Term {
  enum class Kind { kVar, kNumeral, kApply };

  Kind kind = Kind::kVar;
  std::string name;         // variable or function symbol
  std::uint64_t value = 0;  // numeral
  std::vector<Term> args;

  static Term var(std::string name);
  static Term numeral(std::uint64_t value);
  static Term apply(std::string symbol, std::vector<Term> args);
};

bool operator==(const Term& a, const Term& b);

struct Formula {
  enum class Kind { kEq, kRel, kNot, kAnd, kOr, kImplies, kExists, kForall };

  Kind kind = Kind::kEq;
  std::string name;  // relation symbol, or the bound variable of a quantifier
  std::vector<Term> terms;
  std::vector<Formula> children;

  static Formula eq(Term lhs, Term rhs);
  static Formula rel(std::string symbol, std::vector<Term> args);
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);
};

bool operator==(const Formula& a, const Formula& b);

// Fully parenthesised rendering; parse_formula(to_string(f)) == f.
std::string to_string(const Term& t);
std::string to_string(const Formula& f);

std::set<std::string> free_variables(const Formula& f);
int quantifier_depth(const Formula& f);

// Rewrites a -> b to !a | b and forall z. a to !(exists z. !a), then
// renames bound variables so that no binder shadows a free or enclosing
// bound variable.
Formula normalize(const Formula& f);

// phi(x; y1..ym): one object variable and an ordered parameter tuple.
struct ParamFormula {
  Formula formula;
  std::string object = "x";
  std::vector<std::string> params;
  std::string source;  // text as written by the user

  std::size_t arity() const { return params.size(); }
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Parses a formula over sig. Identifiers naming an arity-0 function symbol
// are constants; other identifiers in term position are variables.
Formula parse_bare_formula(std::string_view text, const Signature& sig);

// Parses and checks free(formula) == {object} u params exactly.
ParamFormula parse_formula(std::string_view text, const Signature& sig,
                           std::string object, std::vector<std::string> params);

// As above with object "x" and the remaining free variables, sorted, as the
// parameter tuple.
ParamFormula parse_formula(std::string_view text, const Signature& sig);

using Assignment = std::map<std::string, Element>;

struct CompileOptions {
  // Replace exists z. t(z) = s by a lookup in the precomputed image of t.
  bool memoize = true;
};

// A formula bound to one structure with variables resolved to slots.
// Immutable after construction and safe to share between threads.
class CompiledFormula {
 public:
  // Slot 0 holds the object variable, slots 1..m the parameters.
  CompiledFormula(const FiniteStructure& m, const ParamFormula& pf,
                  CompileOptions options = {});
  // Variables listed in `vars` take slots 0..k-1 in order.
  CompiledFormula(const FiniteStructure& m, const Formula& f,
                  const std::vector<std::string>& vars, CompileOptions options = {});
  ~CompiledFormula();
  CompiledFormula(CompiledFormula&&) noexcept;
  CompiledFormula& operator=(CompiledFormula&&) noexcept;

  const FiniteStructure& structure() const { return *structure_; }
  std::size_t arity() const { return arity_; }
  std::size_t memoized_subformulas() const;
  // True when the formula has the shape x = t(params) and solutions are
  // computed directly.
  bool has_explicit_solution() const;

  bool holds(Element x, std::span<const Element> params) const;
  // Evaluates with all leading slots given explicitly.
  bool holds_slots(std::span<const Element> slots) const;

  std::size_t count(std::span<const Element> params) const;
  std::vector<Element> solutions(std::span<const Element> params) const;
  // Solutions as a bitset over the universe (bit x of word x/64).
  void solution_bits(std::span<const Element> params, std::span<std::uint64_t> out) const;

 private:
  struct Program;
  const FiniteStructure* structure_;
  std::size_t arity_ = 0;
  std::unique_ptr<Program> program_;
};

// Tarskian truth of f in m under a. Throws Error when a free variable of f is
// unbound; extra bindings are ignored.
bool evaluate(const FiniteStructure& m, const Formula& f, const Assignment& a);

std::size_t solution_count(const FiniteStructure& m, const ParamFormula& pf,
                           std::span<const Element> params);
std::vector<Element> solution_set(const FiniteStructure& m, const ParamFormula& pf,
                                  std::span<const Element> params);

}  // namespace hexp

#endif  // HEXP_FOLANG_H_
