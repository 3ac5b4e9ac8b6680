#ifndef HEXP_HGREEDY_H_
#define HEXP_HGREEDY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hexp/asymptotics.h"
#include "hexp/common.h"
#include "hexp/finitemodels.h"
#include "hexp/folang.h"

namespace hexp {

// Inputs and derived constants of one greedy construction. All logarithms
// are natural.
struct GreedyConfig {
  std::vector<ParamFormula> cover;  // Delta, each with a non-empty parameter tuple
  std::vector<MeasureProfile> cover_profiles;
  std::vector<ParamFormula> avoid;  // Gamma, algebraic
  std::vector<MeasureProfile> avoid_profiles;
  double mu = 0.0;                    // measure floor, 0 < mu < min E
  std::size_t max_cover_arity = 0;    // l0
  std::size_t max_avoid_arity = 0;    // k0
  std::size_t avoid_solution_bound = 0;  // max solutions of any Gamma formula
  std::size_t c_gamma = 0;            // avoid_solution_bound * |Gamma|
  double c_delta_gamma = 0.0;         // n * (ceil(l0 / -ln(1 - mu/2)) + 1)

  std::size_t n() const { return cover.size(); }
  // Steps per cover formula: ceil(l0 ln|M| / -ln(1 - mu/2)) + 1.
  std::size_t h_m(std::size_t universe) const;
  double size_bound(std::size_t universe) const;  // C_{Delta,Gamma} * ln|M|
};

std::size_t steps_per_formula(double log_universe, std::size_t max_cover_arity, double mu);
double cover_size_constant(std::size_t n, std::size_t max_cover_arity, double mu);

// Builds the config from existing profiles. mu defaults to min(E)/2 over
// Delta. Throws ConfigError when mu reaches a measure of some Delta formula or
// some Gamma formula is not uniformly algebraic.
GreedyConfig derive_config(std::vector<ParamFormula> cover, std::vector<MeasureProfile> cover_profiles,
                           std::vector<ParamFormula> avoid, std::vector<MeasureProfile> avoid_profiles,
                           std::optional<double> mu);

// Profiles every formula over the family first.
GreedyConfig derive_config(std::vector<ParamFormula> cover, std::vector<ParamFormula> avoid,
                           std::optional<double> mu, std::span<const FiniteStructure> family,
                           const ProfileOptions& options = {});

struct ThresholdDiagnostics {
  std::size_t universe = 0;
  std::size_t h_m = 0;
  std::size_t n_h_m = 0;
  // C_Gamma (n h_M + l0)^k0 / |M|  <=  mu/2
  double density_lhs = 0.0;
  double density_rhs = 0.0;
  // (1 - mu/2) |M|  >  n h_M
  double room_lhs = 0.0;
  double room_rhs = 0.0;

  bool density_ok() const { return density_lhs <= density_rhs; }
  bool room_ok() const { return room_lhs > room_rhs; }
  bool ok() const { return density_ok() && room_ok(); }
};

ThresholdDiagnostics size_threshold(const GreedyConfig& cfg, std::size_t universe);
inline bool size_threshold_ok(const GreedyConfig& cfg, std::size_t universe) {
  return size_threshold(cfg, universe).ok();
}

struct Provenance {
  std::size_t formula = 0;  // index into Delta
  std::size_t step = 0;     // 0-based step within that formula's phase
};

// Elements in construction order; the order is lexicographic in provenance.
struct HSet {
  std::vector<Element> elements;
  std::vector<Provenance> provenance;

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
  bool contains(Element e) const;
  void append(Element e, Provenance p);
};

// Elements a with M |= xi(a; z) for some xi in Gamma and z from H, plus all
// solutions of parameterless members of Gamma. Sorted.
std::vector<Element> forbidden_set(const FiniteStructure& m, std::span<const Element> h,
                                   std::span<const ParamFormula> avoid);

// The construction ran out of eligible elements with parameters still
// uncovered.
class StructureTooSmall : public Error {
 public:
  using Error::Error;
};

struct GreedyState {
  std::size_t formula = 0;
  std::size_t step = 0;
  HSet h;
  std::vector<Tuple> uncovered;      // Y
  std::vector<Element> forbidden;    // L
  std::vector<Element> eligible;     // X = M \ (H u L)
};

// Starts the phase for cover formula `formula` with Y = psi set of it.
GreedyState start_phase(const FiniteStructure& m, const GreedyConfig& cfg, std::size_t formula, HSet carried);

// One step: recompute L and X, pick the smallest-index element of X that
// satisfies the most tuples of Y, remove those tuples. Throws Error on empty Y
// and StructureTooSmall on empty X.
GreedyState greedy_step(const GreedyState& state, const FiniteStructure& m, const GreedyConfig& cfg);

enum class BuildMode { kStrict, kBestEffort };

struct CoverCertificate {
  std::string formula;
  bool exhaustive = true;
  std::size_t checked = 0;
  std::vector<Tuple> failures;

  bool passed() const { return failures.empty(); }
  std::string status() const;
};

struct AvoidViolation {
  Element element = 0;
  Tuple params;
};

struct AvoidCertificate {
  std::string formula;
  std::size_t checked = 0;
  std::vector<AvoidViolation> violations;

  bool passed() const { return violations.empty(); }
  std::string status() const;
};

struct StepRecord {
  std::size_t formula = 0;
  std::size_t step = 0;
  Element element = 0;
  std::size_t h_before = 0;
  std::size_t y_before = 0;
  std::size_t y_after = 0;
  // The shrink inequality is only claimed while |H| <= n h_M under a
  // passing threshold.
  bool bound_applies = false;
  bool shrink_ok = true;

  double shrink() const {
    return y_before == 0 ? 0.0 : static_cast<double>(y_after) / static_cast<double>(y_before);
  }
};

struct BuildReport {
  std::string structure;
  std::size_t universe = 0;
  BuildMode mode = BuildMode::kStrict;
  ThresholdDiagnostics threshold;
  double size_bound = 0.0;  // C_{Delta,Gamma} ln|M|
  bool size_bound_ok = false;
  std::vector<CoverCertificate> cover;
  std::vector<AvoidCertificate> avoid;
  std::vector<StepRecord> steps;
  std::size_t shrink_violations = 0;
  std::optional<std::string> error;  // StructureTooSmall in best_effort

  bool passed() const;
};

struct BuildResult {
  HSet h;
  BuildReport report;
};

struct CertificateOptions {
  std::size_t enumeration_budget = kPsiEnumerationBudget;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
};

// Greedy construction over all of Delta in order. Strict mode requires the
// size threshold and throws ConfigError otherwise; best_effort runs anyway
// and records StructureTooSmall in the report instead of throwing when
// `capture_errors` is set.
BuildResult build_h(const FiniteStructure& m, const GreedyConfig& cfg, BuildMode mode,
                    const CertificateOptions& certs = {}, bool capture_errors = false);

CoverCertificate verify_cover(const FiniteStructure& m, std::span<const Element> h, const ParamFormula& pf,
                              const MeasureProfile& profile, const CertificateOptions& options = {});

// Exhaustive over x in H and parameters from H strictly before x.
AvoidCertificate verify_avoid(const FiniteStructure& m, std::span<const Element> h, const ParamFormula& xi);

std::string_view mode_name(BuildMode mode);

}  // namespace hexp

#endif  // HEXP_HGREEDY_H_
