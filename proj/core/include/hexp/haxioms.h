#ifndef HEXP_HAXIOMS_H_
#define HEXP_HAXIOMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hexp/asymptotics.h"
#include "hexp/finitemodels.h"
#include "hexp/folang.h"
#include "hexp/hgreedy.h"

namespace hexp {

// Printed at the top of every axiom report.
extern const char* const kAxiomScope;

struct IndependenceReport {
  // Order-restricted: avoid certificates, one per avoid formula.
  std::vector<AvoidCertificate> ordered;
  // Symmetric: x in H against tuples from H \ {x}. Informational.
  std::size_t symmetric_checked = 0;
  std::vector<AvoidViolation> symmetric_witnesses;

  bool passed() const;
};

// Order-restricted independence must pass; the symmetric count is reported
// only.
IndependenceReport check_independence(const FiniteStructure& m, std::span<const Element> h,
                                      std::span<const ParamFormula> avoid);

struct DensityReport {
  std::vector<CoverCertificate> per_formula;

  std::size_t failures() const;
  bool passed() const { return failures() == 0; }
};

// For every large-classified parameter tuple some element of H is a
// solution. Algebraic tuples are skipped.
DensityReport check_density(const FiniteStructure& m, std::span<const Element> h,
                            std::span<const ParamFormula> cover, std::span<const MeasureProfile> profiles,
                            const CertificateOptions& options = {});

struct ExtensionOptions {
  std::size_t samples = 1000;
  std::size_t max_base = 3;  // |A|
  std::uint64_t seed = 1;
  // Draws per sample before a formula with no large tuple is given up on.
  std::size_t max_attempts = 64;
};

struct ExtensionFailure {
  std::size_t formula = 0;
  Tuple params;
  std::vector<Element> base;
};

struct ExtensionReport {
  std::size_t sampled = 0;
  std::size_t skipped = 0;  // draws that found no large tuple
  std::uint64_t seed = 0;
  std::size_t max_base = 0;
  // Smallest solution count allowed for a large tuple by the profiles, and
  // the largest closure the union bound permits. When the first exceeds the
  // second every sample must pass.
  double min_large_count = 0.0;
  double max_closure = 0.0;
  std::vector<ExtensionFailure> failures;

  bool sufficient_condition() const { return min_large_count > max_closure; }
  bool passed() const { return failures.empty(); }
};

// Samples (phi, a, A) with a large and |A| <= max_base, and checks that
// phi(M; a) is not contained in the closure of H u a u A.
ExtensionReport check_extension(const FiniteStructure& m, std::span<const Element> h,
                                std::span<const ParamFormula> cover, std::span<const MeasureProfile> profiles,
                                std::span<const ParamFormula> avoid, std::size_t c_gamma,
                                const ExtensionOptions& options = {});

struct AxiomReport {
  std::string scope = kAxiomScope;
  std::string structure;
  IndependenceReport independence;
  DensityReport density;
  ExtensionReport extension;

  bool passed() const { return independence.passed() && density.passed() && extension.passed(); }
};

AxiomReport check_axioms(const FiniteStructure& m, std::span<const Element> h, const GreedyConfig& cfg,
                         const CertificateOptions& density_options = {},
                         const ExtensionOptions& extension_options = {});

}  // namespace hexp

#endif  // HEXP_HAXIOMS_H_
