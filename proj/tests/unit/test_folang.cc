#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "hexp/folang.h"
#include "oracles.h"

namespace {

using hexp::Element;
using hexp::Formula;
using hexp::ParamFormula;

const hexp::Signature& ring() {
  static const auto m = hexp::make_prime_field(7);
  return m.signature();
}

TEST(Parser, QuantifierDepthAndFreeVariables) {
  const ParamFormula pf = hexp::parse_formula("exists z. z*z = x - y", ring(), "x", {"y"});
  EXPECT_EQ(hexp::quantifier_depth(pf.formula), 1);
  EXPECT_EQ(hexp::free_variables(pf.formula), (std::set<std::string>{"x", "y"}));
}

TEST(Parser, ContradictionIsFalseEverywhere) {
  const auto m = hexp::make_prime_field(7);
  const ParamFormula pf = hexp::parse_formula("x = y & !(x = y)", m.signature(), "x", {"y"});
  for (Element y = 0; y < 7; ++y) EXPECT_EQ(hexp::solution_count(m, pf, std::vector<Element>{y}), 0u);
}

TEST(Parser, LovelyPairFormulaStructure) {
  const Formula f = hexp::parse_bare_formula("exists z. z*z = x - y1 & !(exists z. z*z = x - y2)", ring());
  // The quantifier scope extends to the right, so the conjunction sits
  // inside the first quantifier.
  ASSERT_EQ(f.kind, Formula::Kind::kExists);
  EXPECT_EQ(f.children[0].kind, Formula::Kind::kAnd);
  EXPECT_EQ(hexp::free_variables(f), (std::set<std::string>{"x", "y1", "y2"}));
}

TEST(Parser, Precedence) {
  const Formula f = hexp::parse_bare_formula("!x = y & x = z | y = z -> x = x", ring());
  ASSERT_EQ(f.kind, Formula::Kind::kImplies);
  ASSERT_EQ(f.children[0].kind, Formula::Kind::kOr);
  ASSERT_EQ(f.children[0].children[0].kind, Formula::Kind::kAnd);
  EXPECT_EQ(f.children[0].children[0].children[0].kind, Formula::Kind::kNot);
}

TEST(Parser, ImplicationIsRightAssociative) {
  const Formula f = hexp::parse_bare_formula("x = x -> y = y -> z = z", ring());
  ASSERT_EQ(f.kind, Formula::Kind::kImplies);
  EXPECT_EQ(f.children[1].kind, Formula::Kind::kImplies);
}

TEST(Parser, ParenthesisedTermVersusFormula) {
  EXPECT_NO_THROW(hexp::parse_bare_formula("(x + y) * z = x", ring()));
  EXPECT_NO_THROW(hexp::parse_bare_formula("(x = y) & (y = x)", ring()));
  EXPECT_NO_THROW(hexp::parse_bare_formula("((x)) = y", ring()));
}

TEST(Parser, RoundTripThroughPrinting) {
  for (const char* text : {"exists z. z*z = x - y", "x = y & !(x = y)", "forall u. x = u -> x = y",
                           "exists z. z*z = x - y1 & !(exists z. z*z = x - y2)", "x = y + 1 * 2 - zero"}) {
    const Formula f = hexp::parse_bare_formula(text, ring());
    EXPECT_EQ(hexp::parse_bare_formula(hexp::to_string(f), ring()), f) << text;
  }
}

TEST(Parser, SyntaxErrorsCarryPositions) {
  try {
    hexp::parse_bare_formula("x = ", ring());
    FAIL();
  } catch (const hexp::ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(hexp::parse_bare_formula("x = y)", ring()), hexp::ParseError);
  EXPECT_THROW(hexp::parse_bare_formula("exists . x = y", ring()), hexp::ParseError);
  EXPECT_THROW(hexp::parse_bare_formula("x @ y", ring()), hexp::ParseError);
}

TEST(Parser, SemanticErrors) {
  EXPECT_THROW(hexp::parse_bare_formula("f(x) = y", ring()), hexp::ParseError);
  EXPECT_THROW(hexp::parse_bare_formula("+(x) = y", ring()), hexp::ParseError);
  const auto k = hexp::make_extension_field(3);
  EXPECT_THROW(hexp::parse_bare_formula("frob(x, y) = y", k.signature()), hexp::ParseError);
  EXPECT_THROW(hexp::parse_bare_formula("insub = x", k.signature()), hexp::ParseError);
  EXPECT_NO_THROW(hexp::parse_bare_formula("insub(x) & frob(x) = x", k.signature()));
}

TEST(Parser, FreeVariableMismatch) {
  EXPECT_THROW(hexp::parse_formula("x = y", ring(), "x", {}), hexp::Error);
  EXPECT_THROW(hexp::parse_formula("x = y", ring(), "x", {"y", "z"}), hexp::Error);
  EXPECT_THROW(hexp::parse_formula("x = y", ring(), "x", {"y", "y"}), hexp::Error);
  EXPECT_NO_THROW(hexp::parse_formula("x = y", ring(), "x", {"y"}));
}

TEST(Parser, DefaultParametersAreSortedFreeVariables) {
  const ParamFormula pf = hexp::parse_formula("x = y2 + y1", ring());
  EXPECT_EQ(pf.object, "x");
  EXPECT_EQ(pf.params, (std::vector<std::string>{"y1", "y2"}));
}

TEST(Evaluate, Examples) {
  const auto gf7 = hexp::make_prime_field(7);
  EXPECT_TRUE(hexp::evaluate(gf7, hexp::parse_bare_formula("x = y", gf7.signature()), {{"x", 2}, {"y", 2}}));
  EXPECT_TRUE(hexp::evaluate(gf7, hexp::parse_bare_formula("exists z. z*z = x - y", gf7.signature()),
                             {{"x", 4}, {"y", 3}}));
  const auto z13 = hexp::make_cyclic_group(13);
  EXPECT_TRUE(hexp::evaluate(z13, hexp::parse_bare_formula("x = y + z + z", z13.signature()),
                             {{"x", 0}, {"y", 0}, {"z", 0}}));
}

TEST(Evaluate, MissingBindingIsAnError) {
  const auto gf7 = hexp::make_prime_field(7);
  EXPECT_THROW(hexp::evaluate(gf7, hexp::parse_bare_formula("x = y", gf7.signature()), {{"x", 2}}), hexp::Error);
}

TEST(Evaluate, IrrelevantBindingsAreIgnored) {
  const auto gf7 = hexp::make_prime_field(7);
  const Formula f = hexp::parse_bare_formula("exists z. z*z = 2", gf7.signature());
  EXPECT_EQ(hexp::evaluate(gf7, f, {}), hexp::evaluate(gf7, f, {{"q", 3}, {"x", 1}}));
}

TEST(SolutionCount, SquareShiftExamples) {
  const auto gf7 = hexp::make_prime_field(7);
  const auto gf11 = hexp::make_prime_field(11);
  const ParamFormula sq7 = hexp::parse_formula("exists z. z*z = x - y", gf7.signature(), "x", {"y"});
  const ParamFormula sq11 = hexp::parse_formula("exists z. z*z = x - y", gf11.signature(), "x", {"y"});
  EXPECT_EQ(hexp::solution_count(gf7, sq7, std::vector<Element>{3}), 4u);
  EXPECT_EQ(hexp::solution_count(gf11, sq11, std::vector<Element>{0}), 6u);
  EXPECT_EQ(hexp::solution_set(gf7, sq7, std::vector<Element>{0}), (std::vector<Element>{0, 1, 2, 4}));
  const ParamFormula eq = hexp::parse_formula("x = y", gf11.signature(), "x", {"y"});
  EXPECT_EQ(hexp::solution_count(gf11, eq, std::vector<Element>{5}), 1u);
  EXPECT_EQ(hexp::solution_set(gf11, eq, std::vector<Element>{5}), (std::vector<Element>{5}));
}

TEST(SolutionCount, NotEqual) {
  const auto z13 = hexp::make_cyclic_group(13);
  const ParamFormula ne = hexp::parse_formula("!(x = y)", z13.signature(), "x", {"y"});
  std::vector<Element> expected;
  for (Element e = 1; e < 13; ++e) expected.push_back(e);
  EXPECT_EQ(hexp::solution_set(z13, ne, std::vector<Element>{0}), expected);
}

TEST(SolutionCount, ArityMismatch) {
  const auto gf7 = hexp::make_prime_field(7);
  const ParamFormula eq = hexp::parse_formula("x = y", gf7.signature(), "x", {"y"});
  EXPECT_THROW(hexp::solution_count(gf7, eq, std::vector<Element>{}), hexp::Error);
}

TEST(SolutionCount, SquareShiftIsHalfPlusOneExhaustive) {
  for (std::uint64_t p = 3; p <= 199; ++p) {
    if (!oracle::is_prime(p)) continue;
    const auto m = hexp::make_prime_field(p);
    const hexp::CompiledFormula cf(m, hexp::parse_formula("exists z. z*z = x - y", m.signature(), "x", {"y"}));
    for (Element y = 0; y < p; ++y) ASSERT_EQ(cf.count(std::vector<Element>{y}), (p + 1) / 2) << p << " " << y;
  }
}

TEST(Memoization, SquareShiftIsMemoized) {
  const auto m = hexp::make_prime_field(31);
  const hexp::CompiledFormula cf(m, hexp::parse_formula("exists z. z*z = x - y", m.signature(), "x", {"y"}));
  EXPECT_EQ(cf.memoized_subformulas(), 1u);
}

TEST(Memoization, AgreesWithNaiveEvaluation) {
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {5u, 13u, 29u, 53u}) {
    const auto m = hexp::make_prime_field(p);
    for (const char* text : {"exists z. z*z = x - y", "exists z. z*z*z = x + y", "exists z. y*z = x",
                             "!(exists z. z*z = x - y) & !(x = y)"}) {
      const ParamFormula pf = hexp::parse_formula(text, m.signature(), "x", {"y"});
      const hexp::CompiledFormula memo(m, pf);
      const hexp::CompiledFormula naive(m, pf, {false});
      std::uniform_int_distribution<Element> pick(0, static_cast<Element>(p - 1));
      for (int i = 0; i < 50; ++i) {
        const Element x = pick(rng), y = pick(rng);
        const std::vector<Element> params{y};
        ASSERT_EQ(memo.holds(x, params), naive.holds(x, params)) << text;
        ASSERT_EQ(memo.count(params), naive.count(params)) << text;
      }
    }
  }
}

TEST(ExplicitSolution, FastPathAgreesWithEnumeration) {
  const auto m = hexp::make_cyclic_group(17);
  const ParamFormula pf = hexp::parse_formula("x = z + 1", m.signature(), "x", {"z"});
  const hexp::CompiledFormula cf(m, pf);
  EXPECT_TRUE(cf.has_explicit_solution());
  const oracle::Evaluator ev(m);
  for (Element z = 0; z < 17; ++z) {
    EXPECT_EQ(cf.count(std::vector<Element>{z}), ev.count(pf, {z}));
    EXPECT_EQ(cf.solutions(std::vector<Element>{z}), (std::vector<Element>{(z + 1) % 17}));
  }
}

TEST(Normalize, RemovesImplicationAndUniversal) {
  const Formula f = hexp::normalize(hexp::parse_bare_formula("forall u. x = u -> x = y", ring()));
  std::function<void(const Formula&)> check = [&](const Formula& g) {
    EXPECT_NE(g.kind, Formula::Kind::kImplies);
    EXPECT_NE(g.kind, Formula::Kind::kForall);
    for (const auto& c : g.children) check(c);
  };
  check(f);
}

TEST(Normalize, RenamesShadowedBinders) {
  const Formula f = hexp::normalize(hexp::parse_bare_formula("exists z. (z = x & exists z. z = y)", ring()));
  ASSERT_EQ(f.kind, Formula::Kind::kExists);
  std::set<std::string> binders;
  std::function<void(const Formula&)> collect = [&](const Formula& g) {
    if (g.kind == Formula::Kind::kExists) EXPECT_TRUE(binders.insert(g.name).second) << g.name;
    for (const auto& c : g.children) collect(c);
  };
  collect(f);
}

TEST(Evaluate, AgreesWithTreeWalkingOracle) {
  const auto m = hexp::make_prime_field(11);
  const oracle::Evaluator ev(m);
  for (const char* text : {"forall u. x = u -> x = y", "exists z. (z = x & exists z. z = y)",
                           "!(exists z. z*z = x - y) | x = y + one", "exists u. forall v. u*v = v & x = u + y"}) {
    const ParamFormula pf = hexp::parse_formula(text, m.signature(), "x", {"y"});
    const hexp::CompiledFormula cf(m, pf);
    for (Element y = 0; y < 11; ++y) EXPECT_EQ(cf.count(std::vector<Element>{y}), ev.count(pf, {y})) << text;
  }
}

}  // namespace
