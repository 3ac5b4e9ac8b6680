#ifndef HEXP_ASYMPTOTICS_H_
#define HEXP_ASYMPTOTICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hexp/common.h"
#include "hexp/finitemodels.h"
#include "hexp/folang.h"

namespace hexp {

// Number of tuples in universe^arity; throws BudgetExceeded past `budget`.
std::size_t tuple_space_size(std::size_t universe, std::size_t arity, std::size_t budget);
// Tuples are indexed lexicographically: the first coordinate is most
// significant, so index order is lexicographic index order.
Tuple decode_tuple(std::size_t index, std::size_t universe, std::size_t arity);
std::size_t encode_tuple(std::span<const Element> tuple, std::size_t universe);

struct ParamClass {
  enum class Kind { kAlgebraic, kLarge };
  Kind kind = Kind::kAlgebraic;
  std::size_t count = 0;
  double measure = 0.0;  // meaningful for kLarge only

  bool large() const { return kind == Kind::kLarge; }
};

struct StructureProfile {
  std::size_t size = 0;
  // max over large tuples of |count - mu*|M|| / sqrt(|M|)
  double max_residual = 0.0;
  std::size_t n_algebraic = 0;
  std::size_t n_large = 0;
  bool sampled = false;
};

// Empirical measure set E, error constant C and algebraic bound B of a
// formula over a family.
struct MeasureProfile {
  std::string formula;
  std::size_t arity = 0;
  std::vector<double> measures;                // E, sorted
  double error_constant = 0.0;                 // C
  std::optional<std::size_t> algebraic_bound;  // B
  double gap = 0.05;
  std::uint64_t seed = 0;
  std::vector<StructureProfile> per_structure;

  bool uniformly_algebraic() const { return measures.empty(); }
  double min_measure() const { return measures.empty() ? 0.0 : measures.front(); }
};

struct ProfileOptions {
  double gap = 0.05;
  std::uint64_t seed = 1;
  // Tuples drawn per structure when m * log2|M| exceeds enumeration_bits.
  std::size_t sample_size = 10000;
  double enumeration_bits = 24.0;
  // Largest acceptable C.
  double c_ceiling = 10.0;
};

// One counted parameter tuple, for the optional raw-count CSV.
struct CountRecord {
  std::size_t size = 0;
  Tuple params;
  ParamClass cls;
};

// The counts are not within any C*sqrt|M| envelope at this scale.
class NotAsymptoticError : public Error {
 public:
  NotAsymptoticError(const std::string& message, std::vector<std::string> offenders);
  const std::vector<std::string>& offenders() const { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

// A count lies outside both the algebraic class and every measure envelope.
class ClassificationGapError : public Error {
 public:
  using Error::Error;
};

MeasureProfile profile_family(std::span<const FiniteStructure> family, const ParamFormula& pf,
                              const ProfileOptions& options = {},
                              std::vector<CountRecord>* counts = nullptr);

ParamClass classify_count(const MeasureProfile& profile, std::size_t universe, std::size_t count);
ParamClass classify(const MeasureProfile& profile, const FiniteStructure& m, const ParamFormula& pf,
                    std::span<const Element> params);

constexpr std::size_t kPsiEnumerationBudget = 10'000'000;

// All tuples classified Large, in lexicographic order.
std::vector<Tuple> psi_set(const FiniteStructure& m, const ParamFormula& pf,
                           const MeasureProfile& profile,
                           std::size_t budget = kPsiEnumerationBudget);

}  // namespace hexp

#endif  // HEXP_ASYMPTOTICS_H_
