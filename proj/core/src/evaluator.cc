#include <algorithm>
#include <array>
#include <bit>
#include <utility>

#include "hexp/folang.h"

namespace hexp {
namespace {

constexpr std::size_t kMaxSlots = 64;

void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::kVar) out.insert(t.name);
  for (const Term& a : t.args) term_vars(a, out);
}

std::set<std::string> term_vars(const Term& t) {
  std::set<std::string> out;
  term_vars(t, out);
  return out;
}

void flatten_and(Formula f, std::vector<Formula>& out) {
  if (f.kind == Formula::Kind::kAnd) {
    flatten_and(std::move(f.children[0]), out);
    flatten_and(std::move(f.children[1]), out);
  } else {
    out.push_back(std::move(f));
  }
}

Formula join_and(std::vector<Formula> parts) {
  Formula f = std::move(parts[0]);
  for (std::size_t i = 1; i < parts.size(); ++i) f = Formula::conj(std::move(f), std::move(parts[i]));
  return f;
}

// exists z. (A & B) with z not free in B becomes (exists z. A) & B. Sound on
// non-empty universes and exposes exists z. t(z) = s to memoization.
Formula miniscope(const Formula& f) {
  if (f.kind == Formula::Kind::kEq || f.kind == Formula::Kind::kRel) return f;
  Formula g = f;
  for (Formula& c : g.children) c = miniscope(c);
  if (g.kind != Formula::Kind::kExists) return g;
  std::vector<Formula> conjuncts;
  flatten_and(std::move(g.children[0]), conjuncts);
  std::vector<Formula> with, without;
  for (Formula& c : conjuncts) (free_variables(c).count(g.name) ? with : without).push_back(std::move(c));
  if (without.empty()) return Formula::exists(g.name, join_and(std::move(with)));
  if (!with.empty()) without.push_back(Formula::exists(g.name, join_and(std::move(with))));
  return join_and(std::move(without));
}

}  // namespace

struct CompiledFormula::Program {
  struct TermNode {
    enum Kind : std::uint8_t { kSlot, kConst, kOp1, kOp2, kOpN } kind;
    Element value = 0;
    const Operation* op = nullptr;
    std::vector<int> args;
  };
  struct Node {
    enum Kind : std::uint8_t { kEq, kRel1, kRelN, kNot, kAnd, kOr, kExists, kMemo };
    explicit Node(Kind k) : kind(k) {}
    Kind kind;
    int a = -1;
    int b = -1;
    std::size_t slot = 0;
    const Relation* rel = nullptr;
    std::vector<int> args;
  };

  const FiniteStructure* m = nullptr;
  std::vector<TermNode> terms;
  std::vector<Node> nodes;
  std::vector<std::vector<std::uint8_t>> images;
  int root = -1;
  int explicit_term = -1;
  std::size_t slots = 0;
  bool memoize = true;

  Element eval_term(int i, const Element* s) const {
    const TermNode& t = terms[i];
    switch (t.kind) {
      case TermNode::kSlot:
        return s[t.value];
      case TermNode::kConst:
        return t.value;
      case TermNode::kOp1:
        return t.op->apply1(eval_term(t.args[0], s));
      case TermNode::kOp2:
        return t.op->apply2(eval_term(t.args[0], s), eval_term(t.args[1], s));
      case TermNode::kOpN: {
        std::vector<Element> vals;
        for (int a : t.args) vals.push_back(eval_term(a, s));
        return (*t.op)(vals);
      }
    }
    return 0;
  }

  bool eval(int i, Element* s) const {
    const Node& n = nodes[i];
    switch (n.kind) {
      case Node::kEq:
        return eval_term(n.a, s) == eval_term(n.b, s);
      case Node::kRel1:
        return n.rel->contains1(eval_term(n.a, s));
      case Node::kRelN: {
        std::vector<Element> vals;
        for (int a : n.args) vals.push_back(eval_term(a, s));
        return n.rel->contains(vals);
      }
      case Node::kNot:
        return !eval(n.a, s);
      case Node::kAnd:
        return eval(n.a, s) && eval(n.b, s);
      case Node::kOr:
        return eval(n.a, s) || eval(n.b, s);
      case Node::kExists: {
        const std::size_t size = m->size();
        for (std::size_t e = 0; e < size; ++e) {
          s[n.slot] = static_cast<Element>(e);
          if (eval(n.a, s)) return true;
        }
        return false;
      }
      case Node::kMemo:
        return images[n.b][eval_term(n.a, s)] != 0;
    }
    return false;
  }

  using Scope = std::map<std::string, std::size_t>;

  int compile_term(const Term& t, const Scope& scope) {
    TermNode node;
    switch (t.kind) {
      case Term::Kind::kVar: {
        auto it = scope.find(t.name);
        if (it == scope.end()) throw Error("missing variable binding for '" + t.name + "'");
        node.kind = TermNode::kSlot;
        node.value = static_cast<Element>(it->second);
        break;
      }
      case Term::Kind::kNumeral:
        node.kind = TermNode::kConst;
        node.value = m->numeral(t.value);
        break;
      case Term::Kind::kApply: {
        auto idx = m->signature().function_index(t.name);
        if (!idx) throw Error("unknown function symbol '" + t.name + "' in " + m->name());
        const Operation& op = m->function(*idx);
        if (op.arity() != static_cast<int>(t.args.size()))
          throw Error("arity mismatch for '" + t.name + "'");
        if (op.arity() == 0) {
          node.kind = TermNode::kConst;
          node.value = op(std::span<const Element>{});
          break;
        }
        for (const Term& a : t.args) node.args.push_back(compile_term(a, scope));
        node.kind = op.arity() == 1 ? TermNode::kOp1 : op.arity() == 2 ? TermNode::kOp2 : TermNode::kOpN;
        node.op = &op;
        break;
      }
    }
    terms.push_back(std::move(node));
    return static_cast<int>(terms.size()) - 1;
  }

  int push(Node n) {
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  // exists z. t(z) = s with t mentioning only z and s not mentioning z.
  int try_memoize(const Formula& f, Scope& scope) {
    const Formula& body = f.children[0];
    if (!memoize || body.kind != Formula::Kind::kEq) return -1;
    for (int side = 0; side < 2; ++side) {
      const Term& image_side = body.terms[side];
      const Term& other = body.terms[1 - side];
      const auto iv = term_vars(image_side);
      if (iv.size() != 1 || !iv.count(f.name) || term_vars(other).count(f.name)) continue;
      const std::size_t zslot = slots++;
      if (slots > kMaxSlots) throw Error("formula uses too many variables");
      Scope inner = scope;
      inner[f.name] = zslot;
      const int t = compile_term(image_side, inner);
      std::vector<std::uint8_t> image(m->size(), 0);
      std::array<Element, kMaxSlots> s{};
      for (std::size_t e = 0; e < m->size(); ++e) {
        s[zslot] = static_cast<Element>(e);
        image[eval_term(t, s.data())] = 1;
      }
      images.push_back(std::move(image));
      Node n{Node::kMemo};
      n.a = compile_term(other, scope);
      n.b = static_cast<int>(images.size()) - 1;
      return push(std::move(n));
    }
    return -1;
  }

  int compile(const Formula& f, Scope& scope) {
    switch (f.kind) {
      case Formula::Kind::kEq: {
        Node n{Node::kEq};
        n.a = compile_term(f.terms[0], scope);
        n.b = compile_term(f.terms[1], scope);
        return push(std::move(n));
      }
      case Formula::Kind::kRel: {
        auto idx = m->signature().relation_index(f.name);
        if (!idx) throw Error("unknown relation symbol '" + f.name + "' in " + m->name());
        const Relation& rel = m->relation(*idx);
        if (rel.arity() != static_cast<int>(f.terms.size()))
          throw Error("arity mismatch for '" + f.name + "'");
        Node n{rel.arity() == 1 ? Node::kRel1 : Node::kRelN};
        n.rel = &rel;
        for (const Term& t : f.terms) n.args.push_back(compile_term(t, scope));
        if (n.kind == Node::kRel1) n.a = n.args[0];
        return push(std::move(n));
      }
      case Formula::Kind::kNot: {
        Node n{Node::kNot};
        n.a = compile(f.children[0], scope);
        return push(std::move(n));
      }
      case Formula::Kind::kAnd:
      case Formula::Kind::kOr: {
        Node n{f.kind == Formula::Kind::kAnd ? Node::kAnd : Node::kOr};
        n.a = compile(f.children[0], scope);
        n.b = compile(f.children[1], scope);
        return push(std::move(n));
      }
      case Formula::Kind::kExists: {
        if (int memo = try_memoize(f, scope); memo >= 0) return memo;
        Node n{Node::kExists};
        n.slot = slots++;
        if (slots > kMaxSlots) throw Error("formula uses too many variables");
        Scope inner = scope;
        inner[f.name] = n.slot;
        n.a = compile(f.children[0], inner);
        return push(std::move(n));
      }
      case Formula::Kind::kImplies:
      case Formula::Kind::kForall:
        break;
    }
    throw Error("formula not normalized");
  }

  void detect_explicit(const Formula& f, const Scope& scope, const std::string& object) {
    if (f.kind != Formula::Kind::kEq) return;
    for (int side = 0; side < 2; ++side) {
      const Term& lhs = f.terms[side];
      const Term& rhs = f.terms[1 - side];
      if (lhs.kind == Term::Kind::kVar && lhs.name == object && !term_vars(rhs).count(object)) {
        explicit_term = compile_term(rhs, scope);
        return;
      }
    }
  }
};

CompiledFormula::CompiledFormula(const FiniteStructure& m, const Formula& f,
                                 const std::vector<std::string>& vars, CompileOptions options)
    : structure_(&m), arity_(vars.empty() ? 0 : vars.size() - 1), program_(std::make_unique<Program>()) {
  Program& p = *program_;
  p.m = &m;
  p.memoize = options.memoize;
  Program::Scope scope;
  for (const auto& v : vars) {
    if (!scope.emplace(v, p.slots).second) throw Error("variable '" + v + "' listed twice");
    ++p.slots;
  }
  if (p.slots > kMaxSlots) throw Error("formula uses too many variables");
  const Formula prepared = miniscope(normalize(f));
  p.root = p.compile(prepared, scope);
  if (!vars.empty()) p.detect_explicit(prepared, scope, vars[0]);
}

CompiledFormula::CompiledFormula(const FiniteStructure& m, const ParamFormula& pf,
                                 CompileOptions options)
    : CompiledFormula(m, pf.formula,
                      [&] {
                        std::vector<std::string> vars{pf.object};
                        vars.insert(vars.end(), pf.params.begin(), pf.params.end());
                        return vars;
                      }(),
                      options) {
  arity_ = pf.params.size();
}

CompiledFormula::~CompiledFormula() = default;
CompiledFormula::CompiledFormula(CompiledFormula&&) noexcept = default;
CompiledFormula& CompiledFormula::operator=(CompiledFormula&&) noexcept = default;

std::size_t CompiledFormula::memoized_subformulas() const { return program_->images.size(); }

bool CompiledFormula::has_explicit_solution() const { return program_->explicit_term >= 0; }

bool CompiledFormula::holds_slots(std::span<const Element> slots) const {
  std::array<Element, kMaxSlots> s{};
  std::copy(slots.begin(), slots.end(), s.begin());
  return program_->eval(program_->root, s.data());
}

bool CompiledFormula::holds(Element x, std::span<const Element> params) const {
  if (params.size() != arity_) throw Error("parameter tuple has the wrong length");
  std::array<Element, kMaxSlots> s{};
  s[0] = x;
  std::copy(params.begin(), params.end(), s.begin() + 1);
  return program_->eval(program_->root, s.data());
}

std::size_t CompiledFormula::count(std::span<const Element> params) const {
  if (params.size() != arity_) throw Error("parameter tuple has the wrong length");
  const Program& p = *program_;
  std::array<Element, kMaxSlots> s{};
  std::copy(params.begin(), params.end(), s.begin() + 1);
  if (p.explicit_term >= 0) return 1;
  std::size_t total = 0;
  const std::size_t n = structure_->size();
  for (std::size_t x = 0; x < n; ++x) {
    s[0] = static_cast<Element>(x);
    total += p.eval(p.root, s.data()) ? 1 : 0;
  }
  return total;
}

std::vector<Element> CompiledFormula::solutions(std::span<const Element> params) const {
  if (params.size() != arity_) throw Error("parameter tuple has the wrong length");
  const Program& p = *program_;
  std::array<Element, kMaxSlots> s{};
  std::copy(params.begin(), params.end(), s.begin() + 1);
  if (p.explicit_term >= 0) return {p.eval_term(p.explicit_term, s.data())};
  std::vector<Element> out;
  const std::size_t n = structure_->size();
  for (std::size_t x = 0; x < n; ++x) {
    s[0] = static_cast<Element>(x);
    if (p.eval(p.root, s.data())) out.push_back(static_cast<Element>(x));
  }
  return out;
}

void CompiledFormula::solution_bits(std::span<const Element> params,
                                    std::span<std::uint64_t> out) const {
  std::fill(out.begin(), out.end(), 0);
  for (Element x : solutions(params)) out[x / 64] |= std::uint64_t{1} << (x % 64);
}

bool evaluate(const FiniteStructure& m, const Formula& f, const Assignment& a) {
  std::vector<std::string> vars;
  std::vector<Element> vals;
  for (const auto& v : free_variables(f)) {
    auto it = a.find(v);
    if (it == a.end()) throw Error("missing variable binding for '" + v + "'");
    if (it->second >= m.size()) throw Error("assignment outside the universe");
    vars.push_back(v);
    vals.push_back(it->second);
  }
  const CompiledFormula cf(m, f, vars);
  return cf.holds_slots(vals);
}

std::size_t solution_count(const FiniteStructure& m, const ParamFormula& pf,
                           std::span<const Element> params) {
  if (params.size() != pf.params.size()) throw Error("parameter tuple has the wrong length");
  return CompiledFormula(m, pf).count(params);
}

std::vector<Element> solution_set(const FiniteStructure& m, const ParamFormula& pf,
                                  std::span<const Element> params) {
  if (params.size() != pf.params.size()) throw Error("parameter tuple has the wrong length");
  return CompiledFormula(m, pf).solutions(params);
}

}  // namespace hexp
