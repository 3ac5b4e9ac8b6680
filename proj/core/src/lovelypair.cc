#include "hexp/lovelypair.h"

#include <algorithm>
#include <cmath>

#include "hexp/parallel.h"

namespace hexp {

QuadraticPair build_quadratic_pair(std::uint64_t p) {
  if (p == 2) throw ConfigError("p = 2 is not supported: the characteristic-2 variant uses cubes");
  QuadraticPair pair{make_extension_field(p), 0, 0};
  const Relation& sub = pair.field.relation("insub");
  const Operation& frob = pair.field.function("frob");
  while (sub.contains1(pair.a1)) ++pair.a1;
  pair.a2 = frob.apply1(pair.a1);
  if (pair.a1 == pair.a2) throw Error("frob fixes an element outside the subfield");
  return pair;
}

std::vector<std::uint8_t> square_table(const FiniteStructure& k) {
  const Operation& mul = k.function("*");
  std::vector<std::uint8_t> sq(k.size(), 0);
  for (std::size_t z = 0; z < k.size(); ++z) sq[mul.apply2(static_cast<Element>(z), static_cast<Element>(z))] = 1;
  return sq;
}

PatternCounts pattern_counts(const FiniteStructure& k, std::span<const std::uint8_t> squares, Element a1,
                             Element a2) {
  const Operation& sub = k.function("-");
  PatternCounts c;
  for (std::size_t x = 0; x < k.size(); ++x) {
    const bool s1 = squares[sub.apply2(static_cast<Element>(x), a1)] != 0;
    const bool s2 = squares[sub.apply2(static_cast<Element>(x), a2)] != 0;
    ++(s1 ? (s2 ? c.ss : c.sn) : (s2 ? c.ns : c.nn));
  }
  return c;
}

std::size_t phi_count(const FiniteStructure& k, std::span<const std::uint8_t> squares, Element a1, Element a2) {
  return pattern_counts(k, squares, a1, a2).sn;
}

std::size_t phi_count(const FiniteStructure& k, Element a1, Element a2) {
  return phi_count(k, square_table(k), a1, a2);
}

std::size_t subfield_violations(const FiniteStructure& k, std::span<const std::uint8_t> squares, Element a1,
                                Element a2) {
  const Operation& sub = k.function("-");
  const Relation& insub = k.relation("insub");
  std::size_t v = 0;
  for (std::size_t b = 0; b < k.size(); ++b) {
    if (!insub.contains1(static_cast<Element>(b))) continue;
    if (squares[sub.apply2(static_cast<Element>(b), a1)] && !squares[sub.apply2(static_cast<Element>(b), a2)]) ++v;
  }
  return v;
}

std::size_t subfield_violations(const FiniteStructure& k, Element a1, Element a2) {
  return subfield_violations(k, square_table(k), a1, a2);
}

double deviation_envelope(std::size_t q) { return 1.5 * std::sqrt(static_cast<double>(q)) + 3.0; }

double QuadraticPairReport::deviation() const {
  return std::fabs(static_cast<double>(phi_count) - q_over_4());
}

bool LovelyPairSummary::all_violations_zero() const {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.subfield_violations == 0; });
}

bool LovelyPairSummary::all_large() const {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.large(); });
}

bool LovelyPairSummary::all_within_envelope() const {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.within_envelope(); });
}

LovelyPairSummary run_experiment(std::span<const std::uint64_t> primes, const LovelyPairOptions& options) {
  for (std::uint64_t p : primes) {
    if (p == 2) throw ConfigError("p = 2 is not supported: the characteristic-2 variant uses cubes");
    if (!is_prime(p)) throw ConfigError(std::to_string(p) + " is not prime");
  }
  std::vector<std::vector<QuadraticPairReport>> per_prime(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const QuadraticPair pair = build_quadratic_pair(primes[i]);
    const FiniteStructure& k = pair.field;
    const auto squares = square_table(k);
    std::vector<Element> firsts;
    if (options.sweep_all_a1) {
      const Relation& insub = k.relation("insub");
      for (std::size_t a = 0; a < k.size(); ++a)
        if (!insub.contains1(static_cast<Element>(a))) firsts.push_back(static_cast<Element>(a));
    } else {
      firsts.push_back(pair.a1);
    }
    const Operation& frob = k.function("frob");
    auto& out = per_prime[i];
    out.resize(firsts.size());
    parallel_for(firsts.size(), [&](std::size_t j) {
      QuadraticPairReport& r = out[j];
      r.p = primes[i];
      r.q = k.size();
      r.a1 = firsts[j];
      r.a2 = frob.apply1(r.a1);
      r.patterns = pattern_counts(k, squares, r.a1, r.a2);
      r.phi_count = r.patterns.sn;
      r.subfield_violations = subfield_violations(k, squares, r.a1, r.a2);
    });
  }
  LovelyPairSummary summary;
  for (auto& v : per_prime) summary.reports.insert(summary.reports.end(), v.begin(), v.end());
  return summary;
}

}  // namespace hexp
