#include "hexp/asymptotics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hexp/parallel.h"

namespace hexp {

NotAsymptoticError::NotAsymptoticError(const std::string& message, std::vector<std::string> offenders)
    : Error([&] {
        std::string full = message;
        for (const auto& o : offenders) full += "\n  " + o;
        return full;
      }()),
      offenders_(std::move(offenders)) {}

std::size_t tuple_space_size(std::size_t universe, std::size_t arity, std::size_t budget) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (universe != 0 && total > budget / universe)
      throw BudgetExceeded("parameter space " + std::to_string(universe) + "^" +
                           std::to_string(arity) + " exceeds the enumeration budget");
    total *= universe;
  }
  if (total > budget) throw BudgetExceeded("parameter space exceeds the enumeration budget");
  return total;
}

Tuple decode_tuple(std::size_t index, std::size_t universe, std::size_t arity) {
  Tuple t(arity);
  for (std::size_t i = arity; i-- > 0;) {
    t[i] = static_cast<Element>(index % universe);
    index /= universe;
  }
  return t;
}

std::size_t encode_tuple(std::span<const Element> tuple, std::size_t universe) {
  std::size_t idx = 0;
  for (Element e : tuple) idx = idx * universe + e;
  return idx;
}

namespace {

std::string tuple_text(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

// Smallest multiple of 0.01 strictly above x.
double round_up_strict(double x) { return (std::floor(x * 100.0 + 1e-9) + 1.0) / 100.0; }

struct Counted {
  std::vector<Tuple> tuples;
  std::vector<std::size_t> counts;
  bool sampled = false;
};

Counted count_structure(const FiniteStructure& m, const ParamFormula& pf, const ProfileOptions& opt,
                        std::uint64_t stream) {
  const CompiledFormula cf(m, pf);
  const std::size_t arity = pf.arity();
  const std::size_t n = m.size();
  Counted out;
  const double bits = static_cast<double>(arity) * std::log2(static_cast<double>(n));
  if (bits <= opt.enumeration_bits) {
    const std::size_t total = tuple_space_size(n, arity, std::numeric_limits<std::size_t>::max());
    out.tuples.resize(total);
    for (std::size_t i = 0; i < total; ++i) out.tuples[i] = decode_tuple(i, n, arity);
  } else {
    out.sampled = true;
    std::mt19937_64 rng(opt.seed ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(n - 1));
    out.tuples.resize(opt.sample_size);
    for (Tuple& t : out.tuples) {
      t.resize(arity);
      for (Element& e : t) e = pick(rng);
    }
    std::sort(out.tuples.begin(), out.tuples.end());
  }
  out.counts.resize(out.tuples.size());
  parallel_for(out.tuples.size(), [&](std::size_t i) { out.counts[i] = cf.count(out.tuples[i]); });
  return out;
}

std::size_t nearest_measure(const std::vector<double>& measures, std::size_t n, std::size_t count) {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < measures.size(); ++k) {
    const double d = std::fabs(static_cast<double>(count) - measures[k] * static_cast<double>(n));
    if (d < best_dist) {
      best_dist = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

MeasureProfile profile_family(std::span<const FiniteStructure> family, const ParamFormula& pf,
                              const ProfileOptions& opt, std::vector<CountRecord>* records) {
  if (family.size() < 2) throw ConfigError("profiling needs at least two structures");
  if (!(opt.gap > 0.0 && opt.gap < 1.0)) throw ConfigError("gap threshold must lie in (0,1)");
  std::vector<const FiniteStructure*> order;
  for (const auto& m : family) order.push_back(&m);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->size() < b->size(); });

  std::vector<Counted> counted;
  for (std::size_t s = 0; s < order.size(); ++s) counted.push_back(count_structure(*order[s], pf, opt, s));

  MeasureProfile prof;
  prof.formula = pf.source.empty() ? to_string(pf.formula) : pf.source;
  prof.arity = pf.arity();
  prof.gap = opt.gap;
  prof.seed = opt.seed;

  // Single-linkage clustering of the normalized counts pooled over the
  // larger half of the family. A cluster is represented by its members from
  // the largest structure that contributes to it, so a measure seen only on
  // part of the family (e.g. odd n in Z_n) is kept while small-size drift
  // neither biases E nor shows up as a spurious measure.
  struct Point {
    double value;
    std::size_t structure;
    std::size_t count;
  };
  std::vector<Point> pooled;
  for (std::size_t s = order.size() / 2; s < order.size(); ++s) {
    const double n = static_cast<double>(order[s]->size());
    for (std::size_t c : counted[s].counts) pooled.push_back({static_cast<double>(c) / n, s, c});
  }
  std::sort(pooled.begin(), pooled.end(), [](const Point& a, const Point& b) {
    return a.value != b.value ? a.value < b.value : a.structure < b.structure;
  });
  std::optional<std::size_t> bound;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i + 1;
    while (j < pooled.size() && pooled[j].value - pooled[j - 1].value <= opt.gap) ++j;
    std::size_t top = 0, max_count = 0;
    for (std::size_t k = i; k < j; ++k) {
      top = std::max(top, pooled[k].structure);
      max_count = std::max(max_count, pooled[k].count);
    }
    double sum = 0.0;
    std::size_t members = 0;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].structure != top) continue;
      sum += pooled[k].value;
      ++members;
    }
    const double mean = sum / static_cast<double>(members);
    if (mean < opt.gap) {
      bound = std::max(bound.value_or(0), max_count);
    } else {
      prof.measures.push_back(mean);
    }
    i = j;
  }
  prof.algebraic_bound = bound;

  // Assign every observed count and fit C.
  double worst = 0.0;
  bool unbounded = false;
  for (std::size_t s = 0; s < order.size(); ++s) {
    const std::size_t n = order[s]->size();
    const double root = std::sqrt(static_cast<double>(n));
    StructureProfile sp;
    sp.size = n;
    sp.sampled = counted[s].sampled;
    for (std::size_t i = 0; i < counted[s].counts.size(); ++i) {
      const std::size_t c = counted[s].counts[i];
      ParamClass cls;
      cls.count = c;
      if (bound && c <= *bound) {
        ++sp.n_algebraic;
      } else if (prof.measures.empty()) {
        unbounded = true;
        continue;
      } else {
        const std::size_t k = nearest_measure(prof.measures, n, c);
        const double residual =
            std::fabs(static_cast<double>(c) - prof.measures[k] * static_cast<double>(n)) / root;
        sp.max_residual = std::max(sp.max_residual, residual);
        worst = std::max(worst, residual);
        ++sp.n_large;
        cls.kind = ParamClass::Kind::kLarge;
        cls.measure = prof.measures[k];
      }
      if (records) records->push_back({n, counted[s].tuples[i], cls});
    }
    prof.per_structure.push_back(sp);
  }
  prof.error_constant = round_up_strict(worst);

  // Rescans the counts for the five worst tuples; only runs on failure.
  auto report_worst = [&](const std::string& why) {
    struct Offender {
      double residual;
      std::size_t s, i;
    };
    std::vector<Offender> offenders;
    for (std::size_t s = 0; s < order.size(); ++s) {
      const double n = static_cast<double>(order[s]->size());
      for (std::size_t i = 0; i < counted[s].counts.size(); ++i) {
        const std::size_t c = counted[s].counts[i];
        if (bound && c <= *bound) continue;
        double residual = std::numeric_limits<double>::infinity();
        if (!prof.measures.empty()) {
          const std::size_t k = nearest_measure(prof.measures, order[s]->size(), c);
          residual = std::fabs(static_cast<double>(c) - prof.measures[k] * n) / std::sqrt(n);
        }
        offenders.push_back({residual, s, i});
      }
    }
    std::stable_sort(offenders.begin(), offenders.end(),
                     [](const Offender& a, const Offender& b) { return a.residual > b.residual; });
    std::vector<std::string> lines;
    for (std::size_t k = 0; k < offenders.size() && k < 5; ++k) {
      const Offender& o = offenders[k];
      std::ostringstream line;
      line << order[o.s]->name() << " params " << tuple_text(counted[o.s].tuples[o.i]) << " count "
           << counted[o.s].counts[o.i] << " residual/sqrt|M| " << o.residual;
      lines.push_back(line.str());
    }
    throw NotAsymptoticError("'" + prof.formula + "' is not asymptotically one-dimensional at this scale: " + why,
                             std::move(lines));
  };
  if (unbounded) report_worst("counts above the algebraic bound with no measure to absorb them");
  if (prof.error_constant > opt.c_ceiling)
    report_worst("fitted C = " + std::to_string(prof.error_constant) + " exceeds ceiling " +
                 std::to_string(opt.c_ceiling));
  if (bound && !prof.measures.empty() &&
      static_cast<double>(*bound) >= prof.measures.front() * static_cast<double>(order.front()->size()))
    report_worst("algebraic bound B = " + std::to_string(*bound) + " reaches min(E)*|M| on the smallest structure");
  return prof;
}

ParamClass classify_count(const MeasureProfile& profile, std::size_t universe, std::size_t count) {
  ParamClass cls;
  cls.count = count;
  if (profile.algebraic_bound && count <= *profile.algebraic_bound) return cls;
  const double n = static_cast<double>(universe);
  const double envelope = profile.error_constant * std::sqrt(n);
  if (!profile.measures.empty()) {
    const std::size_t k = nearest_measure(profile.measures, universe, count);
    if (std::fabs(static_cast<double>(count) - profile.measures[k] * n) < envelope) {
      cls.kind = ParamClass::Kind::kLarge;
      cls.measure = profile.measures[k];
      return cls;
    }
    if (!profile.algebraic_bound && static_cast<double>(count) < profile.min_measure() * n - envelope) return cls;
  }
  std::ostringstream msg;
  msg << "count " << count << " on |M|=" << universe << " for '" << profile.formula
      << "' is neither algebraic nor within C*sqrt|M| of a measure";
  throw ClassificationGapError(msg.str());
}

ParamClass classify(const MeasureProfile& profile, const FiniteStructure& m, const ParamFormula& pf,
                    std::span<const Element> params) {
  return classify_count(profile, m.size(), solution_count(m, pf, params));
}

std::vector<Tuple> psi_set(const FiniteStructure& m, const ParamFormula& pf, const MeasureProfile& profile,
                           std::size_t budget) {
  const std::size_t total = tuple_space_size(m.size(), pf.arity(), budget);
  const CompiledFormula cf(m, pf);
  std::vector<std::uint8_t> large(total, 0);
  parallel_for(total, [&](std::size_t i) {
    const Tuple t = decode_tuple(i, m.size(), pf.arity());
    large[i] = classify_count(profile, m.size(), cf.count(t)).large() ? 1 : 0;
  });
  std::vector<Tuple> out;
  for (std::size_t i = 0; i < total; ++i)
    if (large[i]) out.push_back(decode_tuple(i, m.size(), pf.arity()));
  return out;
}

}  // namespace hexp
