#include "hexp/haxioms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hexp/hsequence.h"
#include "hexp/parallel.h"

namespace hexp {

const char* const kAxiomScope =
    "finite-scale surrogate: density and extension are checked for the listed cover formulas with "
    "enumerated or sampled parameters, independence and closure for the listed avoid formulas only; "
    "1-types only";

bool IndependenceReport::passed() const {
  return std::all_of(ordered.begin(), ordered.end(), [](const AvoidCertificate& c) { return c.passed(); });
}

IndependenceReport check_independence(const FiniteStructure& m, std::span<const Element> h,
                                      std::span<const ParamFormula> avoid) {
  IndependenceReport rep;
  for (const ParamFormula& xi : avoid) rep.ordered.push_back(verify_avoid(m, h, xi));

  for (const ParamFormula& xi : avoid) {
    const CompiledFormula cf(m, xi);
    const std::size_t k = xi.arity();
    for (std::size_t pos = 0; pos < h.size(); ++pos) {
      std::vector<Element> others;
      for (std::size_t j = 0; j < h.size(); ++j)
        if (j != pos) others.push_back(h[j]);
      if (k > 0 && others.empty()) continue;
      std::vector<std::size_t> idx(k, 0);
      Tuple t(k);
      while (true) {
        for (std::size_t i = 0; i < k; ++i) t[i] = others[idx[i]];
        ++rep.symmetric_checked;
        if (cf.holds(h[pos], t)) rep.symmetric_witnesses.push_back({h[pos], t});
        std::size_t i = k;
        while (i > 0 && ++idx[i - 1] == others.size()) idx[--i] = 0;
        if (i == 0) break;
      }
    }
  }
  return rep;
}

std::size_t DensityReport::failures() const {
  std::size_t total = 0;
  for (const auto& c : per_formula) total += c.failures.size();
  return total;
}

DensityReport check_density(const FiniteStructure& m, std::span<const Element> h,
                            std::span<const ParamFormula> cover, std::span<const MeasureProfile> profiles,
                            const CertificateOptions& options) {
  if (cover.size() != profiles.size()) throw ConfigError("every cover formula needs a profile");
  DensityReport rep;
  for (std::size_t i = 0; i < cover.size(); ++i)
    rep.per_formula.push_back(verify_cover(m, h, cover[i], profiles[i], options));
  return rep;
}

ExtensionReport check_extension(const FiniteStructure& m, std::span<const Element> h,
                                std::span<const ParamFormula> cover, std::span<const MeasureProfile> profiles,
                                std::span<const ParamFormula> avoid, std::size_t c_gamma,
                                const ExtensionOptions& options) {
  if (cover.size() != profiles.size()) throw ConfigError("every cover formula needs a profile");
  ExtensionReport rep;
  rep.seed = options.seed;
  rep.max_base = options.max_base;
  const std::size_t n = m.size();
  const double root = std::sqrt(static_cast<double>(n));

  std::size_t max_arity = 0, k0 = 0;
  for (const auto& pf : cover) max_arity = std::max(max_arity, pf.arity());
  for (const auto& xi : avoid) k0 = std::max(k0, xi.arity());
  rep.min_large_count = std::numeric_limits<double>::infinity();
  for (const auto& p : profiles)
    if (!p.measures.empty())
      rep.min_large_count =
          std::min(rep.min_large_count, p.min_measure() * static_cast<double>(n) - p.error_constant * root);
  rep.max_closure = closure_bound(c_gamma, h.size() + options.max_base + max_arity, k0);

  std::vector<CompiledFormula> compiled;
  for (const auto& pf : cover) compiled.emplace_back(m, pf);

  struct Sample {
    std::size_t formula;
    Tuple params;
    std::vector<Element> base;
  };
  std::vector<Sample> samples;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<Element> pick(0, static_cast<Element>(n - 1));
  std::uniform_int_distribution<std::size_t> pick_formula(0, cover.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_base(0, options.max_base);
  for (std::size_t s = 0; s < options.samples; ++s) {
    const std::size_t f = pick_formula(rng);
    std::optional<Tuple> params;
    for (std::size_t attempt = 0; attempt < options.max_attempts && !params; ++attempt) {
      Tuple t(cover[f].arity());
      for (Element& e : t) e = pick(rng);
      if (classify_count(profiles[f], n, compiled[f].count(t)).large()) params = std::move(t);
    }
    if (!params) {
      ++rep.skipped;
      continue;
    }
    std::vector<Element> base(pick_base(rng));
    for (Element& e : base) e = pick(rng);
    samples.push_back({f, std::move(*params), std::move(base)});
  }
  rep.sampled = samples.size();

  std::vector<std::uint8_t> failed(samples.size(), 0);
  parallel_for(samples.size(), [&](std::size_t i) {
    const Sample& s = samples[i];
    std::vector<Element> extra(s.params.begin(), s.params.end());
    extra.insert(extra.end(), s.base.begin(), s.base.end());
    const ClosureSet cl = closure(m, h, extra, avoid);
    for (Element x : compiled[s.formula].solutions(s.params))
      if (!std::binary_search(cl.elements.begin(), cl.elements.end(), x)) return;
    failed[i] = 1;
  });
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (failed[i]) rep.failures.push_back({samples[i].formula, samples[i].params, samples[i].base});
  return rep;
}

AxiomReport check_axioms(const FiniteStructure& m, std::span<const Element> h, const GreedyConfig& cfg,
                         const CertificateOptions& density_options, const ExtensionOptions& extension_options) {
  AxiomReport rep;
  rep.structure = m.name();
  rep.independence = check_independence(m, h, cfg.avoid);
  rep.density = check_density(m, h, cfg.cover, cfg.cover_profiles, density_options);
  rep.extension = check_extension(m, h, cfg.cover, cfg.cover_profiles, cfg.avoid, cfg.c_gamma, extension_options);
  return rep;
}

}  // namespace hexp
