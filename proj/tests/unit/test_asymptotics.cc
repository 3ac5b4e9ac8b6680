#include <gtest/gtest.h>

#include <cmath>

#include "hexp/asymptotics.h"
#include "oracles.h"

namespace {

using hexp::Element;

std::vector<hexp::FiniteStructure> odd_primes(std::uint64_t lo, std::uint64_t hi) {
  return hexp::enumerate_family({hexp::FamilyKind::kPrimeField, {}, lo, hi});
}

hexp::ParamFormula formula(const hexp::FiniteStructure& m, const char* text) {
  return hexp::parse_formula(text, m.signature());
}

TEST(Tuples, LexicographicEncoding) {
  EXPECT_EQ(hexp::decode_tuple(0, 5, 2), (hexp::Tuple{0, 0}));
  EXPECT_EQ(hexp::decode_tuple(7, 5, 2), (hexp::Tuple{1, 2}));
  for (std::size_t i = 0; i < 125; ++i) EXPECT_EQ(hexp::encode_tuple(hexp::decode_tuple(i, 5, 3), 5), i);
  EXPECT_THROW(hexp::tuple_space_size(1000, 3, 1000000), hexp::BudgetExceeded);
  EXPECT_EQ(hexp::tuple_space_size(1000, 2, 1000000), 1000000u);
}

TEST(Profile, SquareShiftOverPrimes) {
  const auto fam = odd_primes(5, 50);
  const auto prof = hexp::profile_family(fam, formula(fam[0], "exists z. z*z = x - y"));
  ASSERT_EQ(prof.measures.size(), 1u);
  EXPECT_NEAR(prof.measures[0], 0.5, 0.02);
  EXPECT_LE(prof.error_constant, 1.0);
  EXPECT_FALSE(prof.algebraic_bound.has_value());
  // Residual (p+1)/2 - p/2 = 1/2 on |M| = p, normalized by sqrt p, is
  // largest at p = 5 when E = {1/2}; the fitted measure sits a little above
  // 1/2, so the bound is approximate.
  for (const auto& s : prof.per_structure) EXPECT_LE(s.max_residual, 0.5 / std::sqrt(5.0) + 0.2);
}

TEST(Profile, EqualityIsUniformlyAlgebraic) {
  const auto fam = odd_primes(5, 50);
  const auto prof = hexp::profile_family(fam, formula(fam[0], "x = y"));
  EXPECT_TRUE(prof.uniformly_algebraic());
  ASSERT_TRUE(prof.algebraic_bound.has_value());
  EXPECT_EQ(*prof.algebraic_bound, 1u);
}

TEST(Profile, DoublingInCyclicGroupsHasTwoMeasures) {
  const auto fam = hexp::enumerate_family({hexp::FamilyKind::kCyclicGroup, {}, 5, 40});
  const auto prof = hexp::profile_family(fam, formula(fam[0], "exists z. x = y + z + z"));
  ASSERT_EQ(prof.measures.size(), 2u);
  EXPECT_NEAR(prof.measures[0], 0.5, 0.02);
  EXPECT_NEAR(prof.measures[1], 1.0, 0.02);
}

TEST(Profile, NeedsTwoStructures) {
  const auto fam = odd_primes(5, 5);
  EXPECT_THROW(hexp::profile_family(fam, formula(fam[0], "x = y")), hexp::ConfigError);
}

TEST(Profile, CeilingViolationIsDiagnosed) {
  // On GF(5) the square-shift residual is about 0.22, above this ceiling.
  const auto fam = odd_primes(5, 60);
  hexp::ProfileOptions opt;
  opt.c_ceiling = 0.1;
  try {
    hexp::profile_family(fam, formula(fam[0], "exists z. z*z = x - y"), opt);
    FAIL() << "expected a diagnostic";
  } catch (const hexp::NotAsymptoticError& e) {
    EXPECT_FALSE(e.offenders().empty());
    EXPECT_LE(e.offenders().size(), 5u);
    EXPECT_NE(std::string(e.what()).find("GF(5)"), std::string::npos);
  }
}

TEST(Profile, EnvelopeSoundness) {
  const auto fam = hexp::enumerate_family({hexp::FamilyKind::kCyclicGroup, {}, 5, 40});
  const auto pf = formula(fam[0], "exists z. x = y + z + z");
  std::vector<hexp::CountRecord> records;
  const auto prof = hexp::profile_family(fam, pf, {}, &records);
  ASSERT_FALSE(records.empty());
  for (const auto& r : records) {
    const double n = static_cast<double>(r.size);
    bool ok = prof.algebraic_bound && r.cls.count <= *prof.algebraic_bound;
    for (double mu : prof.measures)
      ok = ok || std::fabs(static_cast<double>(r.cls.count) - mu * n) < prof.error_constant * std::sqrt(n);
    EXPECT_TRUE(ok) << r.size;
  }
}

TEST(Classify, Examples) {
  const auto fam = odd_primes(5, 101);
  const auto& gf101 = fam.back();
  const auto sq = formula(gf101, "exists z. z*z = x - y");
  const auto eq = formula(gf101, "x = y");
  const auto psq = hexp::profile_family(fam, sq);
  const auto peq = hexp::profile_family(fam, eq);
  const auto c1 = hexp::classify(psq, gf101, sq, std::vector<Element>{7});
  EXPECT_TRUE(c1.large());
  EXPECT_EQ(c1.count, 51u);
  EXPECT_NEAR(c1.measure, 0.5, 0.02);
  const auto c2 = hexp::classify(peq, gf101, eq, std::vector<Element>{7});
  EXPECT_FALSE(c2.large());
  EXPECT_EQ(c2.count, 1u);

  const auto zfam = hexp::enumerate_family({hexp::FamilyKind::kCyclicGroup, {}, 5, 40});
  const auto dbl = formula(zfam[0], "exists z. x = y + z + z");
  const auto pd = hexp::profile_family(zfam, dbl);
  const auto z15 = hexp::make_cyclic_group(15);
  const auto c3 = hexp::classify(pd, z15, dbl, std::vector<Element>{0});
  EXPECT_TRUE(c3.large());
  EXPECT_NEAR(c3.measure, 1.0, 0.02);
}

TEST(Classify, GapIsAnError) {
  hexp::MeasureProfile prof;
  prof.measures = {0.5};
  prof.error_constant = 0.5;
  prof.algebraic_bound = 2;
  EXPECT_FALSE(hexp::classify_count(prof, 400, 2).large());
  EXPECT_TRUE(hexp::classify_count(prof, 400, 200).large());
  EXPECT_THROW(hexp::classify_count(prof, 400, 100), hexp::ClassificationGapError);
}

TEST(PsiSet, Examples) {
  const auto fam = odd_primes(5, 13);
  const auto& gf7 = fam[1];
  const auto sq = formula(gf7, "exists z. z*z = x - y");
  const auto eq = formula(gf7, "x = y");
  EXPECT_EQ(hexp::psi_set(gf7, sq, hexp::profile_family(fam, sq)).size(), 7u);
  const auto wide = odd_primes(5, 60);
  EXPECT_TRUE(hexp::psi_set(gf7, eq, hexp::profile_family(wide, eq)).empty());

  const auto zfam = hexp::enumerate_family({hexp::FamilyKind::kCyclicGroup, {}, 5, 20});
  const auto ne = formula(zfam[0], "!(x = y)");
  const auto psi = hexp::psi_set(hexp::make_cyclic_group(13), ne, hexp::profile_family(zfam, ne));
  EXPECT_EQ(psi.size(), 13u);
  EXPECT_TRUE(std::is_sorted(psi.begin(), psi.end()));
}

TEST(PsiSet, BudgetExceeded) {
  const auto fam = odd_primes(5, 13);
  const auto pf = hexp::parse_formula("x = y + z", fam[0].signature(), "x", {"y", "z"});
  const auto prof = hexp::profile_family(fam, pf);
  EXPECT_THROW(hexp::psi_set(fam.back(), pf, prof, 100), hexp::BudgetExceeded);
}

TEST(Profile, ScaleStability) {
  const auto fam = odd_primes(5, 199);
  const std::vector<hexp::FiniteStructure> head(fam.begin(), fam.end() - 1);
  const auto pf = formula(fam[0], "exists z. z*z = x - y");
  const auto full = hexp::profile_family(fam, pf);
  const auto partial = hexp::profile_family(head, pf);
  const auto& top = fam.back();
  const hexp::CompiledFormula cf(top, pf);
  for (Element y = 0; y < top.size(); ++y) {
    const std::size_t c = cf.count(std::vector<Element>{y});
    EXPECT_EQ(hexp::classify_count(full, top.size(), c).large(), hexp::classify_count(partial, top.size(), c).large());
  }
}

TEST(Profile, SamplingIsSeeded) {
  const auto fam = odd_primes(101, 131);
  const auto pf = hexp::parse_formula("x = y + z", fam[0].signature(), "x", {"y", "z"});
  hexp::ProfileOptions opt;
  opt.enumeration_bits = 10.0;
  opt.sample_size = 500;
  const auto a = hexp::profile_family(fam, pf, opt);
  const auto b = hexp::profile_family(fam, pf, opt);
  EXPECT_TRUE(a.per_structure.front().sampled);
  EXPECT_EQ(a.per_structure.front().n_algebraic, 500u);
  EXPECT_EQ(a.algebraic_bound, b.algebraic_bound);
}

}  // namespace
