#include "hexp/hgreedy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "hexp/parallel.h"

namespace hexp {
namespace {

// Incidence rows for the cover phase are capped at this many bits (128 MiB).
constexpr std::size_t kIncidenceBitBudget = std::size_t{1} << 30;

// Calls f(tuple) for every tuple in pool^k, lexicographically by position.
template <typename F>
void for_each_tuple(std::span<const Element> pool, std::size_t k, F&& f) {
  if (k == 0) {
    f(Tuple{});
    return;
  }
  if (pool.empty()) return;
  std::vector<std::size_t> pos(k, 0);
  Tuple t(k, pool[0]);
  while (true) {
    f(t);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++pos[i] < pool.size()) {
        t[i] = pool[pos[i]];
        break;
      }
      pos[i] = 0;
      t[i] = pool[0];
      if (i == 0) return;
    }
  }
}

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t budget) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > budget / base) throw BudgetExceeded("tuple enumeration exceeds budget");
    r *= base;
  }
  return r;
}

std::string describe(const ParamFormula& pf) { return pf.source.empty() ? to_string(pf.formula) : pf.source; }

}  // namespace

// ---------------------------------------------------------------------------
// Constants

std::size_t steps_per_formula(double log_universe, std::size_t max_cover_arity, double mu) {
  const double ratio = static_cast<double>(max_cover_arity) * log_universe / -std::log(1.0 - mu / 2.0);
  return static_cast<std::size_t>(std::ceil(ratio)) + 1;
}

double cover_size_constant(std::size_t n, std::size_t max_cover_arity, double mu) {
  const double ratio = static_cast<double>(max_cover_arity) / -std::log(1.0 - mu / 2.0);
  return static_cast<double>(n) * (std::ceil(ratio) + 1.0);
}

std::size_t GreedyConfig::h_m(std::size_t universe) const {
  return steps_per_formula(std::log(static_cast<double>(universe)), max_cover_arity, mu);
}

double GreedyConfig::size_bound(std::size_t universe) const {
  return c_delta_gamma * std::log(static_cast<double>(universe));
}

GreedyConfig derive_config(std::vector<ParamFormula> cover, std::vector<MeasureProfile> cover_profiles,
                           std::vector<ParamFormula> avoid, std::vector<MeasureProfile> avoid_profiles,
                           std::optional<double> mu) {
  if (cover.empty()) throw ConfigError("the cover list (Delta) is empty");
  if (avoid.empty()) throw ConfigError("the avoid list (Gamma) is empty");
  if (cover.size() != cover_profiles.size() || avoid.size() != avoid_profiles.size())
    throw ConfigError("every formula needs a profile");

  GreedyConfig cfg;
  double min_measure = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (cover[i].params.empty())
      throw ConfigError("cover formula '" + describe(cover[i]) + "' needs at least one parameter");
    cfg.max_cover_arity = std::max(cfg.max_cover_arity, cover[i].arity());
    if (!cover_profiles[i].measures.empty()) min_measure = std::min(min_measure, cover_profiles[i].min_measure());
  }
  for (std::size_t i = 0; i < avoid.size(); ++i) {
    if (!avoid_profiles[i].uniformly_algebraic())
      throw ConfigError("avoid formula '" + describe(avoid[i]) + "' is not uniformly algebraic on the family");
    cfg.max_avoid_arity = std::max(cfg.max_avoid_arity, avoid[i].arity());
    cfg.avoid_solution_bound = std::max(cfg.avoid_solution_bound, avoid_profiles[i].algebraic_bound.value_or(0));
  }

  if (mu) {
    if (!(*mu > 0.0 && *mu < 1.0)) throw ConfigError("mu must lie in (0,1)");
    for (std::size_t i = 0; i < cover.size(); ++i) {
      if (!cover_profiles[i].measures.empty() && *mu >= cover_profiles[i].min_measure())
        throw ConfigError("mu = " + std::to_string(*mu) + " is not below the smallest measure " +
                          std::to_string(cover_profiles[i].min_measure()) + " of '" + describe(cover[i]) + "'");
    }
    cfg.mu = *mu;
  } else {
    if (!std::isfinite(min_measure))
      throw ConfigError("no cover formula has a measure; give mu explicitly");
    cfg.mu = min_measure / 2.0;
  }

  cfg.cover = std::move(cover);
  cfg.cover_profiles = std::move(cover_profiles);
  cfg.avoid = std::move(avoid);
  cfg.avoid_profiles = std::move(avoid_profiles);
  cfg.c_gamma = cfg.avoid_solution_bound * cfg.avoid.size();
  cfg.c_delta_gamma = cover_size_constant(cfg.n(), cfg.max_cover_arity, cfg.mu);
  return cfg;
}

GreedyConfig derive_config(std::vector<ParamFormula> cover, std::vector<ParamFormula> avoid,
                           std::optional<double> mu, std::span<const FiniteStructure> family,
                           const ProfileOptions& options) {
  std::vector<MeasureProfile> cp, ap;
  for (const auto& pf : cover) cp.push_back(profile_family(family, pf, options));
  for (const auto& pf : avoid) ap.push_back(profile_family(family, pf, options));
  return derive_config(std::move(cover), std::move(cp), std::move(avoid), std::move(ap), mu);
}

ThresholdDiagnostics size_threshold(const GreedyConfig& cfg, std::size_t universe) {
  ThresholdDiagnostics d;
  d.universe = universe;
  d.h_m = cfg.h_m(universe);
  d.n_h_m = cfg.n() * d.h_m;
  const double m = static_cast<double>(universe);
  d.density_lhs = static_cast<double>(cfg.c_gamma) *
                  std::pow(static_cast<double>(d.n_h_m + cfg.max_cover_arity),
                           static_cast<double>(cfg.max_avoid_arity)) /
                  m;
  d.density_rhs = cfg.mu / 2.0;
  d.room_lhs = (1.0 - cfg.mu / 2.0) * m;
  d.room_rhs = static_cast<double>(d.n_h_m);
  return d;
}

// ---------------------------------------------------------------------------
// H sets and forbidden sets

bool HSet::contains(Element e) const {
  return std::find(elements.begin(), elements.end(), e) != elements.end();
}

void HSet::append(Element e, Provenance p) {
  if (contains(e)) throw Error("element " + std::to_string(e) + " is already in H");
  elements.push_back(e);
  provenance.push_back(p);
}

std::vector<Element> forbidden_set(const FiniteStructure& m, std::span<const Element> h,
                                   std::span<const ParamFormula> avoid) {
  std::vector<std::uint8_t> mark(m.size(), 0);
  for (const ParamFormula& xi : avoid) {
    const CompiledFormula cf(m, xi);
    for_each_tuple(h, xi.arity(), [&](const Tuple& t) {
      for (Element a : cf.solutions(t)) mark[a] = 1;
    });
  }
  std::vector<Element> out;
  for (std::size_t a = 0; a < m.size(); ++a)
    if (mark[a]) out.push_back(static_cast<Element>(a));
  return out;
}

// ---------------------------------------------------------------------------
// Reference step

GreedyState start_phase(const FiniteStructure& m, const GreedyConfig& cfg, std::size_t formula, HSet carried) {
  if (formula >= cfg.n()) throw Error("cover formula index out of range");
  GreedyState s;
  s.formula = formula;
  s.step = 0;
  s.h = std::move(carried);
  s.uncovered = psi_set(m, cfg.cover[formula], cfg.cover_profiles[formula]);
  return s;
}

GreedyState greedy_step(const GreedyState& state, const FiniteStructure& m, const GreedyConfig& cfg) {
  if (state.uncovered.empty()) throw Error("greedy_step needs uncovered parameters; advance to the next formula");
  GreedyState next = state;
  next.forbidden = forbidden_set(m, state.h.elements, cfg.avoid);
  std::vector<std::uint8_t> blocked(m.size(), 0);
  for (Element e : next.forbidden) blocked[e] = 1;
  for (Element e : state.h.elements) blocked[e] = 1;
  next.eligible.clear();
  for (std::size_t a = 0; a < m.size(); ++a)
    if (!blocked[a]) next.eligible.push_back(static_cast<Element>(a));
  if (next.eligible.empty())
    throw StructureTooSmall("no eligible element left in " + m.name() + " with " +
                            std::to_string(state.uncovered.size()) + " parameters uncovered");

  const CompiledFormula phi(m, cfg.cover[state.formula]);
  std::vector<std::size_t> hits(next.eligible.size(), 0);
  parallel_for(next.eligible.size(), [&](std::size_t i) {
    std::size_t c = 0;
    for (const Tuple& t : state.uncovered) c += phi.holds(next.eligible[i], t) ? 1 : 0;
    hits[i] = c;
  });
  const std::size_t best = static_cast<std::size_t>(std::max_element(hits.begin(), hits.end()) - hits.begin());
  const Element chosen = next.eligible[best];

  next.uncovered.clear();
  for (const Tuple& t : state.uncovered)
    if (!phi.holds(chosen, t)) next.uncovered.push_back(t);
  next.h.append(chosen, {state.formula, state.step});
  ++next.step;
  return next;
}

// ---------------------------------------------------------------------------
// Certificates

std::string CoverCertificate::status() const {
  return std::string(exhaustive ? "exhaustive" : "sampled") + (passed() ? "-pass" : "-fail");
}

std::string AvoidCertificate::status() const { return passed() ? "exhaustive-pass" : "exhaustive-fail"; }

CoverCertificate verify_cover(const FiniteStructure& m, std::span<const Element> h, const ParamFormula& pf,
                              const MeasureProfile& profile, const CertificateOptions& options) {
  CoverCertificate cert;
  cert.formula = describe(pf);
  const CompiledFormula cf(m, pf);
  const std::size_t n = m.size();
  std::vector<Tuple> tuples;
  std::size_t total = 0;
  try {
    total = tuple_space_size(n, pf.arity(), options.enumeration_budget);
  } catch (const BudgetExceeded&) {
    cert.exhaustive = false;
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(n - 1));
    tuples.resize(options.samples);
    for (Tuple& t : tuples) {
      t.resize(pf.arity());
      for (Element& e : t) e = pick(rng);
    }
    total = tuples.size();
  }
  std::vector<std::uint8_t> failed(total, 0);
  parallel_for(total, [&](std::size_t i) {
    const Tuple t = cert.exhaustive ? decode_tuple(i, n, pf.arity()) : tuples[i];
    for (Element w : h)
      if (cf.holds(w, t)) return;
    // Unwitnessed: a failure only if the tuple is large.
    if (classify_count(profile, n, cf.count(t)).large()) failed[i] = 1;
  });
  cert.checked = total;
  for (std::size_t i = 0; i < total; ++i)
    if (failed[i]) cert.failures.push_back(cert.exhaustive ? decode_tuple(i, n, pf.arity()) : tuples[i]);
  return cert;
}

AvoidCertificate verify_avoid(const FiniteStructure& m, std::span<const Element> h, const ParamFormula& xi) {
  AvoidCertificate cert;
  cert.formula = describe(xi);
  const std::size_t k = xi.arity();
  checked_power(h.size(), k + 1, 10'000'000);
  const CompiledFormula cf(m, xi);
  for (std::size_t pos = 0; pos < h.size(); ++pos) {
    if (k > 0 && pos == 0) continue;
    for_each_tuple(h.subspan(0, k == 0 ? 0 : pos), k, [&](const Tuple& t) {
      ++cert.checked;
      if (cf.holds(h[pos], t)) cert.violations.push_back({h[pos], t});
    });
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Builder

std::string_view mode_name(BuildMode mode) { return mode == BuildMode::kStrict ? "strict" : "best_effort"; }

bool BuildReport::passed() const {
  if (error) return false;
  for (const auto& c : cover)
    if (!c.passed()) return false;
  for (const auto& c : avoid)
    if (!c.passed()) return false;
  if (mode == BuildMode::kStrict) return size_bound_ok && shrink_violations == 0;
  return true;
}

namespace {

// Maintains L incrementally: when H grows by one element only the tuples that
// mention the new element contribute new solutions.
class ForbiddenTracker {
 public:
  ForbiddenTracker(const FiniteStructure& m, const std::vector<CompiledFormula>& avoid)
      : avoid_(avoid), mark_(m.size(), 0) {
    for (const auto& cf : avoid_)
      if (cf.arity() == 0) add(cf, {});
  }

  void on_append(const std::vector<Element>& h) {
    const std::size_t newest = h.size() - 1;
    for (const auto& cf : avoid_) {
      const std::size_t k = cf.arity();
      if (k == 0) continue;
      std::vector<std::size_t> pos(k, 0);
      // Odometer over positions in [0, newest]^k, keeping tuples that use newest.
      while (true) {
        if (std::find(pos.begin(), pos.end(), newest) != pos.end()) {
          Tuple t(k);
          for (std::size_t i = 0; i < k; ++i) t[i] = h[pos[i]];
          add(cf, t);
        }
        std::size_t i = k;
        bool done = true;
        while (i > 0) {
          --i;
          if (++pos[i] <= newest) {
            done = false;
            break;
          }
          pos[i] = 0;
        }
        if (done) break;
      }
    }
  }

  bool blocked(Element a) const { return mark_[a] != 0; }

 private:
  void add(const CompiledFormula& cf, const Tuple& t) {
    for (Element a : cf.solutions(t)) mark_[a] = 1;
  }

  const std::vector<CompiledFormula>& avoid_;
  std::vector<std::uint8_t> mark_;
};

}  // namespace

BuildResult build_h(const FiniteStructure& m, const GreedyConfig& cfg, BuildMode mode,
                    const CertificateOptions& certs, bool capture_errors) {
  BuildResult res;
  BuildReport& rep = res.report;
  const std::size_t n = m.size();
  rep.structure = m.name();
  rep.universe = n;
  rep.mode = mode;
  rep.threshold = size_threshold(cfg, n);
  rep.size_bound = cfg.size_bound(n);
  if (mode == BuildMode::kStrict && !rep.threshold.ok())
    throw ConfigError("strict build on " + m.name() + " is below the size threshold");

  std::vector<CompiledFormula> avoid;
  for (const auto& xi : cfg.avoid) avoid.emplace_back(m, xi);
  ForbiddenTracker forbidden(m, avoid);
  std::vector<std::uint8_t> in_h(n, 0);
  const std::size_t words = (n + 63) / 64;
  const double shrink_factor = 1.0 - cfg.mu / 2.0;

  try {
    for (std::size_t i = 0; i < cfg.n(); ++i) {
      const ParamFormula& pf = cfg.cover[i];
      const CompiledFormula phi(m, pf);
      const std::size_t tuples = tuple_space_size(n, pf.arity(), kPsiEnumerationBudget);
      if (tuples * words * 64 > kIncidenceBitBudget)
        throw BudgetExceeded("incidence matrix for '" + describe(pf) + "' on " + m.name() + " is too large");
      std::vector<std::uint64_t> rows(tuples * words);
      std::vector<std::uint8_t> large(tuples, 0);
      parallel_for(tuples, [&](std::size_t t) {
        std::span<std::uint64_t> row(rows.data() + t * words, words);
        phi.solution_bits(decode_tuple(t, n, pf.arity()), row);
        std::size_t c = 0;
        for (std::uint64_t w : row) c += static_cast<std::size_t>(std::popcount(w));
        large[t] = classify_count(cfg.cover_profiles[i], n, c).large() ? 1 : 0;
      });
      std::vector<std::size_t> uncovered;
      for (std::size_t t = 0; t < tuples; ++t)
        if (large[t]) uncovered.push_back(t);

      std::vector<std::uint32_t> hits(n);
      for (std::size_t step = 0; !uncovered.empty(); ++step) {
        std::fill(hits.begin(), hits.end(), 0);
        for (std::size_t t : uncovered) {
          const std::uint64_t* row = rows.data() + t * words;
          for (std::size_t w = 0; w < words; ++w) {
            for (std::uint64_t bits = row[w]; bits != 0; bits &= bits - 1)
              ++hits[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))];
          }
        }
        std::optional<Element> chosen;
        for (std::size_t a = 0; a < n; ++a) {
          if (in_h[a] || forbidden.blocked(static_cast<Element>(a))) continue;
          if (!chosen || hits[a] > hits[*chosen]) chosen = static_cast<Element>(a);
        }
        if (!chosen)
          throw StructureTooSmall("no eligible element left in " + m.name() + " while covering '" + describe(pf) +
                                  "' with " + std::to_string(uncovered.size()) + " parameters uncovered");

        StepRecord rec;
        rec.formula = i;
        rec.step = step;
        rec.element = *chosen;
        rec.h_before = res.h.size();
        rec.y_before = uncovered.size();
        const std::size_t word = *chosen / 64;
        const std::uint64_t bit = std::uint64_t{1} << (*chosen % 64);
        std::erase_if(uncovered, [&](std::size_t t) { return (rows[t * words + word] & bit) != 0; });
        rec.y_after = uncovered.size();
        rec.bound_applies = rep.threshold.ok() && rec.h_before <= rep.threshold.n_h_m;
        if (rec.bound_applies) {
          rec.shrink_ok = static_cast<double>(rec.y_after) <= shrink_factor * static_cast<double>(rec.y_before) + 1e-9;
          if (!rec.shrink_ok) ++rep.shrink_violations;
        }
        rep.steps.push_back(rec);

        res.h.append(*chosen, {i, step});
        in_h[*chosen] = 1;
        forbidden.on_append(res.h.elements);
      }
    }
  } catch (const StructureTooSmall& e) {
    if (!capture_errors) throw;
    rep.error = e.what();
  }

  for (std::size_t i = 0; i < cfg.n(); ++i)
    rep.cover.push_back(verify_cover(m, res.h.elements, cfg.cover[i], cfg.cover_profiles[i], certs));
  for (const auto& xi : cfg.avoid) rep.avoid.push_back(verify_avoid(m, res.h.elements, xi));
  rep.size_bound_ok = static_cast<double>(res.h.size()) <= rep.size_bound &&
                      (!rep.threshold.ok() || res.h.size() <= rep.threshold.n_h_m);
  return res;
}

}  // namespace hexp
