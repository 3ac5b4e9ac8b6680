#ifndef HEXP_LOVELYPAIR_H_
#define HEXP_LOVELYPAIR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hexp/finitemodels.h"

namespace hexp {

// GF(p^2) with a1 the least-index element outside the subfield and
// a2 = frob(a1).
struct QuadraticPair {
  FiniteStructure field;
  Element a1 = 0;
  Element a2 = 0;
};

QuadraticPair build_quadratic_pair(std::uint64_t p);

// Membership table of {z*z : z in K}, 0 included.
std::vector<std::uint8_t> square_table(const FiniteStructure& k);

// Counts of x by whether x - a1 and x - a2 are squares (S) or not (N).
struct PatternCounts {
  std::size_t ss = 0, sn = 0, ns = 0, nn = 0;
  std::size_t total() const { return ss + sn + ns + nn; }
};

PatternCounts pattern_counts(const FiniteStructure& k, std::span<const std::uint8_t> squares, Element a1,
                             Element a2);

// |{x : x - a1 square and x - a2 not a square}|.
std::size_t phi_count(const FiniteStructure& k, std::span<const std::uint8_t> squares, Element a1, Element a2);
std::size_t phi_count(const FiniteStructure& k, Element a1, Element a2);

// Subfield elements b satisfying the same formula.
std::size_t subfield_violations(const FiniteStructure& k, std::span<const std::uint8_t> squares, Element a1,
                                Element a2);
std::size_t subfield_violations(const FiniteStructure& k, Element a1, Element a2);

// |phi_count - q/4| may not exceed this.
double deviation_envelope(std::size_t q);

struct QuadraticPairReport {
  std::uint64_t p = 0;
  std::size_t q = 0;
  Element a1 = 0;
  Element a2 = 0;
  std::size_t phi_count = 0;
  std::size_t subfield_violations = 0;
  PatternCounts patterns;

  double q_over_4() const { return static_cast<double>(q) / 4.0; }
  double deviation() const;
  bool within_envelope() const { return deviation() <= deviation_envelope(q); }
  bool large() const { return 8 * phi_count >= q; }
};

struct LovelyPairOptions {
  // One report per non-subfield a1 instead of the least one only.
  bool sweep_all_a1 = false;
};

struct LovelyPairSummary {
  std::vector<QuadraticPairReport> reports;  // ordered by p, then a1

  bool all_violations_zero() const;
  bool all_large() const;
  bool all_within_envelope() const;
  bool passed() const { return all_violations_zero() && all_large() && all_within_envelope(); }
};

// Rejects p = 2 and non-primes before any work.
LovelyPairSummary run_experiment(std::span<const std::uint64_t> primes, const LovelyPairOptions& options = {});

}  // namespace hexp

#endif  // HEXP_LOVELYPAIR_H_
