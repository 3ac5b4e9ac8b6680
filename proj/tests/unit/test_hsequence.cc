#include <gtest/gtest.h>

#include <cmath>

#include "hexp/hsequence.h"
#include "hexp/reports.h"

namespace {

using hexp::Element;

struct Fixture {
  std::vector<hexp::FiniteStructure> family;
  hexp::FormulaSchedule schedule;
  std::vector<hexp::MeasureProfile> cover_profiles, avoid_profiles;
};

Fixture square_shift(std::uint64_t lo, std::uint64_t hi, bool two_formulas) {
  Fixture s;
  s.family = hexp::enumerate_family({hexp::FamilyKind::kPrimeField, {}, lo, hi});
  const auto& sig = s.family[0].signature();
  s.schedule.cover.push_back(hexp::parse_formula("exists z. z*z = x - y", sig, "x", {"y"}));
  s.schedule.avoid.push_back(hexp::parse_formula("x = z", sig, "x", {"z"}));
  if (two_formulas) {
    s.schedule.cover.push_back(hexp::parse_formula("!(x = y)", sig, "x", {"y"}));
    s.schedule.avoid.push_back(hexp::parse_formula("x = z + 1", sig, "x", {"z"}));
  }
  for (const auto& pf : s.schedule.cover) s.cover_profiles.push_back(hexp::profile_family(s.family, pf));
  for (const auto& pf : s.schedule.avoid) s.avoid_profiles.push_back(hexp::profile_family(s.family, pf));
  return s;
}

hexp::SequencePlan plan_for(const Fixture& s, hexp::ScheduleMode mode) {
  hexp::SequenceOptions opt;
  opt.mode = mode;
  opt.mu = 0.4;
  return hexp::schedule_in(s.family, s.schedule, s.cover_profiles, s.avoid_profiles, opt);
}

TEST(ScheduleIn, SmallStructuresGetMinusInfinity) {
  const Fixture s = square_shift(5, 60, false);
  const auto plan = plan_for(s, hexp::ScheduleMode::kStrict);
  for (const auto& e : plan.entries) EXPECT_FALSE(e.i_n.has_value()) << e.structure;
}

TEST(ScheduleIn, MonotoneAndCoarseDimTightens) {
  const Fixture s = square_shift(101, 800, true);
  const auto strict = plan_for(s, hexp::ScheduleMode::kStrict);
  const auto coarse = plan_for(s, hexp::ScheduleMode::kCoarseDim);
  ASSERT_EQ(strict.configs.size(), 2u);
  long prev = -1;
  bool saw_zero = false, saw_one = false;
  for (std::size_t i = 0; i < strict.entries.size(); ++i) {
    const long cur = strict.entries[i].i_n ? static_cast<long>(*strict.entries[i].i_n) : -1;
    EXPECT_GE(cur, prev);
    prev = cur;
    saw_zero = saw_zero || cur == 0;
    saw_one = saw_one || cur == 1;
    const long c = coarse.entries[i].i_n ? static_cast<long>(*coarse.entries[i].i_n) : -1;
    EXPECT_LE(c, cur);
  }
  EXPECT_TRUE(saw_zero);
  EXPECT_TRUE(saw_one);
}

TEST(BuildSequence, EveryReportPasses) {
  const Fixture s = square_shift(101, 499, false);
  auto plan = plan_for(s, hexp::ScheduleMode::kStrict);
  hexp::SequenceOptions opt;
  opt.mu = 0.4;
  hexp::build_sequence(plan, s.family, opt);
  std::size_t built = 0;
  for (const auto& e : plan.entries) {
    EXPECT_EQ(e.h.empty(), !e.i_n.has_value());
    if (!e.report) continue;
    ++built;
    EXPECT_TRUE(e.report->passed()) << e.structure;
    for (const auto& c : e.report->cover) EXPECT_EQ(c.status(), "exhaustive-pass");
  }
  EXPECT_GT(built, 50u);
  EXPECT_TRUE(plan.passed());
}

TEST(BuildSequence, SingleStructureFamily) {
  const Fixture s = square_shift(101, 499, false);
  const std::vector<hexp::FiniteStructure> one{hexp::make_prime_field(499)};
  hexp::SequenceOptions opt;
  opt.mu = 0.4;
  auto plan = hexp::schedule_in(one, s.schedule, s.cover_profiles, s.avoid_profiles, opt);
  hexp::build_sequence(plan, one, opt);
  ASSERT_EQ(plan.entries.size(), 1u);
  EXPECT_TRUE(plan.entries[0].report.has_value());
}

TEST(BuildSequence, Deterministic) {
  const Fixture s = square_shift(101, 300, true);
  hexp::SequenceOptions opt;
  opt.mu = 0.4;
  auto a = plan_for(s, hexp::ScheduleMode::kStrict);
  auto b = plan_for(s, hexp::ScheduleMode::kStrict);
  hexp::build_sequence(a, s.family, opt);
  hexp::build_sequence(b, s.family, opt);
  EXPECT_EQ(hexp::dump(hexp::plan_json(a)), hexp::dump(hexp::plan_json(b)));
}

TEST(Closure, Examples) {
  const auto z101 = hexp::make_cyclic_group(101);
  const std::vector<hexp::ParamFormula> succ{hexp::parse_formula("x = z + 1", z101.signature(), "x", {"z"})};
  const auto cl = hexp::closure(z101, std::vector<Element>{2, 7}, std::vector<Element>{11}, succ);
  EXPECT_EQ(cl.elements, (std::vector<Element>{3, 8, 12}));
  EXPECT_LE(static_cast<double>(cl.elements.size()), hexp::closure_bound(1, cl.base_size, 1));
  const std::vector<hexp::ParamFormula> eq{hexp::parse_formula("x = z", z101.signature(), "x", {"z"})};
  EXPECT_TRUE(hexp::closure(z101, {}, {}, eq).elements.empty());
}

TEST(Closure, SizeBoundOnBuiltSets) {
  const Fixture s = square_shift(101, 700, true);
  auto plan = plan_for(s, hexp::ScheduleMode::kStrict);
  hexp::SequenceOptions opt;
  opt.mu = 0.4;
  hexp::build_sequence(plan, s.family, opt);
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const auto& e = plan.entries[i];
    if (!e.i_n) continue;
    const auto& cfg = plan.configs[*e.i_n];
    const std::vector<Element> a{0, 5, 9};
    const auto cl = hexp::closure(s.family[i], e.h.elements, a, cfg.avoid);
    EXPECT_LE(static_cast<double>(cl.elements.size()),
              hexp::closure_bound(cfg.c_gamma, cl.base_size, cfg.max_avoid_arity));
  }
}

TEST(CoarseDimension, Ratios) {
  EXPECT_NEAR(hexp::coarse_ratio(2, 13), std::log(2.0) / std::log(13.0), 1e-12);
  EXPECT_NEAR(hexp::coarse_ratio(2, 13), 0.270, 5e-4);
  EXPECT_EQ(hexp::coarse_ratio(0, 13), 0.0);
  EXPECT_EQ(hexp::coarse_ratio(1, 13), 0.0);
  // C ln|M| elements give a ratio that falls as |M| grows.
  EXPECT_GT(hexp::coarse_ratio(12 * 7, 1000), hexp::coarse_ratio(12 * 14, 1000000));
}

TEST(CoarseDimension, WindowsSkipEmptyH) {
  hexp::SequencePlan plan;
  const std::vector<std::pair<std::size_t, std::size_t>> data{{10, 0}, {20, 0}, {30, 4}, {40, 4}, {50, 4},
                                                              {60, 4}, {70, 4}, {80, 4}};
  for (auto [n, h] : data) {
    hexp::PlanEntry e;
    e.size = n;
    for (std::size_t i = 0; i < h; ++i) e.h.append(static_cast<Element>(i), {});
    plan.entries.push_back(std::move(e));
  }
  const auto series = hexp::coarse_dimension_series(plan);
  ASSERT_TRUE(series.first_window && series.last_window);
  const double first = (hexp::coarse_ratio(4, 30) + hexp::coarse_ratio(4, 40) + hexp::coarse_ratio(4, 50)) / 3;
  EXPECT_NEAR(*series.first_window, first, 1e-12);
  EXPECT_TRUE(series.strictly_decreasing());
  EXPECT_EQ(series.first_ratio, 0.0);
}

}  // namespace
