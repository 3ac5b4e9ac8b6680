#ifndef HEXP_HSEQUENCE_H_
#define HEXP_HSEQUENCE_H_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hexp/asymptotics.h"
#include "hexp/finitemodels.h"
#include "hexp/folang.h"
#include "hexp/hgreedy.h"

namespace hexp {

// Finite truncation of the formula enumeration. Delta_n and Gamma_n are the
// first n+1 entries of each list (or the whole list once it runs out).
struct FormulaSchedule {
  std::vector<ParamFormula> cover;
  std::vector<ParamFormula> avoid;

  // Number of distinct truncations.
  std::size_t depth() const { return std::max(cover.size(), avoid.size()); }
};

enum class ScheduleMode { kStrict, kBestEffort, kCoarseDim };

std::string_view schedule_mode_name(ScheduleMode mode);
std::optional<ScheduleMode> parse_schedule_mode(std::string_view name);

struct PlanEntry {
  std::string structure;
  std::size_t size = 0;
  std::optional<std::size_t> i_n;  // nullopt stands for -infinity
  HSet h;
  std::optional<BuildReport> report;  // absent when i_n is -infinity
};

struct SequencePlan {
  ScheduleMode mode = ScheduleMode::kStrict;
  double mu = 0.0;
  std::vector<GreedyConfig> configs;  // configs[n] uses Delta_n, Gamma_n
  std::vector<PlanEntry> entries;     // in family order

  bool built = false;
  // True when every built entry's certificates pass.
  bool passed() const;
};

struct SequenceOptions {
  ScheduleMode mode = ScheduleMode::kStrict;
  std::optional<double> mu;
  CertificateOptions certificates;
};

// Computes i_n for every structure. The strict condition is
// size_threshold_ok for (Delta_n, Gamma_n); coarse-dim mode additionally
// requires |M| > C_{Delta_n,Gamma_n}^n. Profiles are given per formula of the
// schedule, in list order.
SequencePlan schedule_in(std::span<const FiniteStructure> family, const FormulaSchedule& schedule,
                         std::span<const MeasureProfile> cover_profiles,
                         std::span<const MeasureProfile> avoid_profiles, const SequenceOptions& options);

// Runs the greedy builder for every entry with a finite i_n.
void build_sequence(SequencePlan& plan, std::span<const FiniteStructure> family,
                    const SequenceOptions& options);

struct ClosureSet {
  std::vector<Element> elements;  // sorted
  std::size_t base_size = 0;      // |H u A|
};

// Union of the solution sets of every avoid formula over parameter tuples
// drawn from H u A, parameterless formulas included.
ClosureSet closure(const FiniteStructure& m, std::span<const Element> h, std::span<const Element> a,
                   std::span<const ParamFormula> avoid);

// C_Gamma * max(1, base)^k0, the union bound on a closure.
double closure_bound(std::size_t c_gamma, std::size_t base_size, std::size_t max_avoid_arity);

struct CoarseDimensionPoint {
  std::size_t size = 0;
  std::size_t h_size = 0;
  double ratio = 0.0;  // ln|H| / ln|M|, 0 when |H| <= 1
};

struct CoarseDimensionSeries {
  std::vector<CoarseDimensionPoint> points;
  double first_ratio = 0.0;
  double last_ratio = 0.0;
  // Averages over the first and last `window` structures with non-empty H.
  std::size_t window = 3;
  std::optional<double> first_window;
  std::optional<double> last_window;

  bool non_increasing() const { return first_window && last_window && *last_window <= *first_window; }
  bool strictly_decreasing() const { return first_window && last_window && *last_window < *first_window; }
};

double coarse_ratio(std::size_t h_size, std::size_t universe);
CoarseDimensionSeries coarse_dimension_series(const SequencePlan& plan, std::size_t window = 3);

}  // namespace hexp

#endif  // HEXP_HSEQUENCE_H_
