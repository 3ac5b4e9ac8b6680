#include <algorithm>
#include <utility>

#include "hexp/folang.h"

namespace hexp {

Term Term::var(std::string name) {
  Term t;
  t.kind = Kind::kVar;
  t.name = std::move(name);
  return t;
}

Term Term::numeral(std::uint64_t value) {
  Term t;
  t.kind = Kind::kNumeral;
  t.value = value;
  return t;
}

Term Term::apply(std::string symbol, std::vector<Term> args) {
  Term t;
  t.kind = Kind::kApply;
  t.name = std::move(symbol);
  t.args = std::move(args);
  return t;
}

bool operator==(const Term& a, const Term& b) {
  return a.kind == b.kind && a.name == b.name && a.value == b.value && a.args == b.args;
}

Formula Formula::eq(Term lhs, Term rhs) {
  Formula f;
  f.kind = Kind::kEq;
  f.terms = {std::move(lhs), std::move(rhs)};
  return f;
}

Formula Formula::rel(std::string symbol, std::vector<Term> args) {
  Formula f;
  f.kind = Kind::kRel;
  f.name = std::move(symbol);
  f.terms = std::move(args);
  return f;
}

Formula Formula::negation(Formula g) {
  Formula f;
  f.kind = Kind::kNot;
  f.children.push_back(std::move(g));
  return f;
}

namespace {

Formula binary(Formula::Kind kind, Formula a, Formula b) {
  Formula f;
  f.kind = kind;
  f.children.push_back(std::move(a));
  f.children.push_back(std::move(b));
  return f;
}

Formula quantifier(Formula::Kind kind, std::string var, Formula body) {
  Formula f;
  f.kind = kind;
  f.name = std::move(var);
  f.children.push_back(std::move(body));
  return f;
}

bool is_infix(const Term& t) {
  return t.kind == Term::Kind::kApply && t.args.size() == 2 &&
         (t.name == "+" || t.name == "-" || t.name == "*");
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out);

void collect_term_vars(const Term& t, const std::set<std::string>& bound,
                       std::set<std::string>& out) {
  if (t.kind == Term::Kind::kVar) {
    if (!bound.count(t.name)) out.insert(t.name);
    return;
  }
  for (const Term& a : t.args) collect_term_vars(a, bound, out);
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind) {
    case Formula::Kind::kEq:
    case Formula::Kind::kRel:
      for (const Term& t : f.terms) collect_term_vars(t, bound, out);
      return;
    case Formula::Kind::kExists:
    case Formula::Kind::kForall: {
      const bool fresh = bound.insert(f.name).second;
      collect_free(f.children[0], bound, out);
      if (fresh) bound.erase(f.name);
      return;
    }
    default:
      for (const Formula& c : f.children) collect_free(c, bound, out);
  }
}

void collect_all_names(const Formula& f, std::set<std::string>& out) {
  std::set<std::string> none;
  for (const Term& t : f.terms) collect_term_vars(t, none, out);
  if (f.kind == Formula::Kind::kExists || f.kind == Formula::Kind::kForall) out.insert(f.name);
  for (const Formula& c : f.children) collect_all_names(c, out);
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& renames) {
  if (t.kind == Term::Kind::kVar) {
    auto it = renames.find(t.name);
    return it == renames.end() ? t : Term::var(it->second);
  }
  Term r = t;
  for (Term& a : r.args) a = rename_term(a, renames);
  return r;
}

class Normalizer {
 public:
  explicit Normalizer(const Formula& root) {
    collect_all_names(root, used_);
    in_scope_ = free_variables(root);
  }

  Formula run(const Formula& f, std::map<std::string, std::string> renames) {
    switch (f.kind) {
      case Formula::Kind::kEq:
      case Formula::Kind::kRel: {
        Formula g = f;
        for (Term& t : g.terms) t = rename_term(t, renames);
        return g;
      }
      case Formula::Kind::kNot:
        return Formula::negation(run(f.children[0], renames));
      case Formula::Kind::kAnd:
      case Formula::Kind::kOr:
        return binary(f.kind, run(f.children[0], renames), run(f.children[1], renames));
      case Formula::Kind::kImplies:
        return Formula::disj(Formula::negation(run(f.children[0], renames)),
                             run(f.children[1], renames));
      case Formula::Kind::kExists:
      case Formula::Kind::kForall: {
        std::string var = f.name;
        if (in_scope_.count(var)) var = fresh(var);
        renames[f.name] = var;
        in_scope_.insert(var);
        Formula body = run(f.children[0], renames);
        in_scope_.erase(var);
        if (f.kind == Formula::Kind::kExists) return Formula::exists(var, std::move(body));
        return Formula::negation(Formula::exists(var, Formula::negation(std::move(body))));
      }
    }
    return f;
  }

 private:
  std::string fresh(const std::string& base) {
    for (int i = 1;; ++i) {
      std::string candidate = base + "_" + std::to_string(i);
      if (!used_.count(candidate)) {
        used_.insert(candidate);
        return candidate;
      }
    }
  }

  std::set<std::string> used_;
  std::set<std::string> in_scope_;
};

}  // namespace

Formula Formula::conj(Formula a, Formula b) { return binary(Kind::kAnd, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Kind::kOr, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) {
  return binary(Kind::kImplies, std::move(a), std::move(b));
}
Formula Formula::exists(std::string var, Formula body) {
  return quantifier(Kind::kExists, std::move(var), std::move(body));
}
Formula Formula::forall(std::string var, Formula body) {
  return quantifier(Kind::kForall, std::move(var), std::move(body));
}

bool operator==(const Formula& a, const Formula& b) {
  return a.kind == b.kind && a.name == b.name && a.terms == b.terms && a.children == b.children;
}

std::string to_string(const Term& t) {
  switch (t.kind) {
    case Term::Kind::kVar:
      return t.name;
    case Term::Kind::kNumeral:
      return std::to_string(t.value);
    case Term::Kind::kApply:
      break;
  }
  if (is_infix(t)) return "(" + to_string(t.args[0]) + " " + t.name + " " + to_string(t.args[1]) + ")";
  if (t.args.empty()) return t.name;
  std::string s = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) s += ", ";
    s += to_string(t.args[i]);
  }
  return s + ")";
}

std::string to_string(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::kEq:
      return to_string(f.terms[0]) + " = " + to_string(f.terms[1]);
    case Formula::Kind::kRel: {
      std::string s = f.name + "(";
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (i) s += ", ";
        s += to_string(f.terms[i]);
      }
      return s + ")";
    }
    case Formula::Kind::kNot:
      return "!(" + to_string(f.children[0]) + ")";
    case Formula::Kind::kAnd:
      return "(" + to_string(f.children[0]) + " & " + to_string(f.children[1]) + ")";
    case Formula::Kind::kOr:
      return "(" + to_string(f.children[0]) + " | " + to_string(f.children[1]) + ")";
    case Formula::Kind::kImplies:
      return "(" + to_string(f.children[0]) + " -> " + to_string(f.children[1]) + ")";
    case Formula::Kind::kExists:
      return "(exists " + f.name + ". " + to_string(f.children[0]) + ")";
    case Formula::Kind::kForall:
      return "(forall " + f.name + ". " + to_string(f.children[0]) + ")";
  }
  return "?";
}

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

int quantifier_depth(const Formula& f) {
  int depth = 0;
  for (const Formula& c : f.children) depth = std::max(depth, quantifier_depth(c));
  if (f.kind == Formula::Kind::kExists || f.kind == Formula::Kind::kForall) ++depth;
  return depth;
}

Formula normalize(const Formula& f) {
  Normalizer n(f);
  return n.run(f, {});
}

}  // namespace hexp
