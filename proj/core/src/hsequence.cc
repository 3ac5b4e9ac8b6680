#include "hexp/hsequence.h"

#include <cmath>
#include <limits>

namespace hexp {

std::string_view schedule_mode_name(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::kStrict:
      return "strict";
    case ScheduleMode::kBestEffort:
      return "best_effort";
    case ScheduleMode::kCoarseDim:
      return "coarse-dim";
  }
  return "strict";
}

std::optional<ScheduleMode> parse_schedule_mode(std::string_view name) {
  if (name == "strict") return ScheduleMode::kStrict;
  if (name == "best_effort") return ScheduleMode::kBestEffort;
  if (name == "coarse-dim") return ScheduleMode::kCoarseDim;
  return std::nullopt;
}

bool SequencePlan::passed() const {
  for (const auto& e : entries)
    if (e.report && !e.report->passed()) return false;
  return true;
}

SequencePlan schedule_in(std::span<const FiniteStructure> family, const FormulaSchedule& schedule,
                         std::span<const MeasureProfile> cover_profiles,
                         std::span<const MeasureProfile> avoid_profiles, const SequenceOptions& options) {
  if (schedule.cover.empty() || schedule.avoid.empty())
    throw ConfigError("the schedule needs at least one cover and one avoid formula");
  if (cover_profiles.size() != schedule.cover.size() || avoid_profiles.size() != schedule.avoid.size())
    throw ConfigError("every scheduled formula needs a profile");

  SequencePlan plan;
  plan.mode = options.mode;
  if (options.mu) {
    plan.mu = *options.mu;
  } else {
    double floor = std::numeric_limits<double>::infinity();
    for (const auto& p : cover_profiles)
      if (!p.measures.empty()) floor = std::min(floor, p.min_measure());
    if (!std::isfinite(floor)) throw ConfigError("no cover formula has a measure; give mu explicitly");
    plan.mu = floor / 2.0;
  }

  for (std::size_t n = 0; n < schedule.depth(); ++n) {
    const std::size_t nc = std::min(n + 1, schedule.cover.size());
    const std::size_t na = std::min(n + 1, schedule.avoid.size());
    plan.configs.push_back(derive_config(
        {schedule.cover.begin(), schedule.cover.begin() + static_cast<std::ptrdiff_t>(nc)},
        {cover_profiles.begin(), cover_profiles.begin() + static_cast<std::ptrdiff_t>(nc)},
        {schedule.avoid.begin(), schedule.avoid.begin() + static_cast<std::ptrdiff_t>(na)},
        {avoid_profiles.begin(), avoid_profiles.begin() + static_cast<std::ptrdiff_t>(na)}, plan.mu));
  }

  for (const FiniteStructure& m : family) {
    PlanEntry entry;
    entry.structure = m.name();
    entry.size = m.size();
    for (std::size_t n = 0; n < plan.configs.size(); ++n) {
      const GreedyConfig& cfg = plan.configs[n];
      bool ok = size_threshold_ok(cfg, m.size());
      if (ok && options.mode == ScheduleMode::kCoarseDim)
        ok = static_cast<double>(m.size()) > std::pow(cfg.c_delta_gamma, static_cast<double>(n));
      if (ok) entry.i_n = n;
    }
    plan.entries.push_back(std::move(entry));
  }
  return plan;
}

void build_sequence(SequencePlan& plan, std::span<const FiniteStructure> family, const SequenceOptions& options) {
  if (family.size() != plan.entries.size()) throw Error("plan and family differ in length");
  const BuildMode mode = options.mode == ScheduleMode::kBestEffort ? BuildMode::kBestEffort : BuildMode::kStrict;
  for (std::size_t s = 0; s < family.size(); ++s) {
    PlanEntry& entry = plan.entries[s];
    entry.h = {};
    entry.report.reset();
    if (!entry.i_n) continue;
    BuildResult r = build_h(family[s], plan.configs[*entry.i_n], mode, options.certificates,
                            mode == BuildMode::kBestEffort);
    entry.h = std::move(r.h);
    entry.report = std::move(r.report);
  }
  plan.built = true;
}

ClosureSet closure(const FiniteStructure& m, std::span<const Element> h, std::span<const Element> a,
                   std::span<const ParamFormula> avoid) {
  std::vector<Element> base(h.begin(), h.end());
  base.insert(base.end(), a.begin(), a.end());
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  ClosureSet out;
  out.base_size = base.size();
  out.elements = forbidden_set(m, base, avoid);
  return out;
}

double closure_bound(std::size_t c_gamma, std::size_t base_size, std::size_t max_avoid_arity) {
  return static_cast<double>(c_gamma) *
         std::pow(static_cast<double>(std::max<std::size_t>(base_size, 1)), static_cast<double>(max_avoid_arity));
}

double coarse_ratio(std::size_t h_size, std::size_t universe) {
  if (h_size <= 1 || universe <= 1) return 0.0;
  return std::log(static_cast<double>(h_size)) / std::log(static_cast<double>(universe));
}

CoarseDimensionSeries coarse_dimension_series(const SequencePlan& plan, std::size_t window) {
  CoarseDimensionSeries series;
  series.window = window;
  std::vector<double> nonempty;
  for (const auto& e : plan.entries) {
    const CoarseDimensionPoint pt{e.size, e.h.size(), coarse_ratio(e.h.size(), e.size)};
    series.points.push_back(pt);
    if (pt.h_size > 0) nonempty.push_back(pt.ratio);
  }
  if (!series.points.empty()) {
    series.first_ratio = series.points.front().ratio;
    series.last_ratio = series.points.back().ratio;
  }
  if (window > 0 && nonempty.size() >= window) {
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
      first += nonempty[i];
      last += nonempty[nonempty.size() - window + i];
    }
    series.first_window = first / static_cast<double>(window);
    series.last_window = last / static_cast<double>(window);
  }
  return series;
}

}  // namespace hexp
