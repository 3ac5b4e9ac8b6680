#include "hexp_tools/runner.h"

#include <algorithm>
#include <ostream>

#include "hexp/asymptotics.h"
#include "hexp/haxioms.h"
#include "hexp/hgreedy.h"
#include "hexp/hsequence.h"
#include "hexp/lovelypair.h"
#include "hexp/parallel.h"
#include "hexp/reports.h"

namespace hexp::tools {

using nlohmann::json;

namespace {

ParamFormula to_param_formula(const FormulaEntry& e, const Signature& sig) {
  if (e.params) return parse_formula(e.text, sig, e.object.value_or("x"), *e.params);
  if (e.object) {
    std::vector<std::string> params;
    for (const auto& v : free_variables(parse_bare_formula(e.text, sig)))
      if (v != *e.object) params.push_back(v);
    return parse_formula(e.text, sig, *e.object, std::move(params));
  }
  return parse_formula(e.text, sig);
}

std::string file_stem(const FiniteStructure& m) {
  return std::string(family_name(m.family())) + "_" + std::to_string(m.parameter());
}

struct Workspace {
  std::vector<FiniteStructure> family;
  std::vector<ParamFormula> cover;
  std::vector<ParamFormula> avoid;
  ProfileOptions profile;
  CertificateOptions certificates;
};

Workspace prepare(const ExperimentConfig& cfg, bool need_cover, bool need_avoid) {
  if (!cfg.family) throw ConfigError("this command needs a 'family'");
  if (need_cover && cfg.cover.empty()) throw ConfigError("this command needs a non-empty 'cover' list");
  if (need_avoid && cfg.avoid.empty()) throw ConfigError("this command needs a non-empty 'avoid' list");
  Workspace w;
  w.family = enumerate_family(*cfg.family);
  const Signature& sig = w.family.front().signature();
  for (const auto& e : cfg.cover) w.cover.push_back(to_param_formula(e, sig));
  for (const auto& e : cfg.avoid) w.avoid.push_back(to_param_formula(e, sig));
  w.profile.gap = cfg.gap;
  w.profile.seed = cfg.seed;
  w.profile.sample_size = cfg.profile_samples;
  w.profile.enumeration_bits = cfg.enumeration_bits;
  w.profile.c_ceiling = cfg.c_ceiling;
  w.certificates.samples = cfg.certificate_samples;
  w.certificates.seed = cfg.seed;
  return w;
}

std::vector<const FiniteStructure*> targets(const Workspace& w, const ExperimentConfig& cfg) {
  std::vector<const FiniteStructure*> out;
  if (cfg.targets.empty()) {
    for (const auto& m : w.family) out.push_back(&m);
    return out;
  }
  for (std::uint64_t t : cfg.targets) {
    auto it = std::find_if(w.family.begin(), w.family.end(), [&](const auto& m) { return m.parameter() == t; });
    if (it == w.family.end()) throw ConfigError("target " + std::to_string(t) + " is not a member of the family");
    out.push_back(&*it);
  }
  return out;
}

BuildMode build_mode(const ExperimentConfig& cfg) {
  if (cfg.mode == ScheduleMode::kCoarseDim) throw ConfigError("mode coarse-dim applies to the sequence command only");
  return cfg.mode == ScheduleMode::kStrict ? BuildMode::kStrict : BuildMode::kBestEffort;
}

struct Built {
  const FiniteStructure* m;
  std::optional<BuildResult> result;  // absent when skipped below the threshold
};

std::vector<Built> build_targets(const Workspace& w, const ExperimentConfig& cfg, const GreedyConfig& gc) {
  const BuildMode mode = build_mode(cfg);
  std::vector<Built> out;
  bool any = false;
  for (const FiniteStructure* m : targets(w, cfg)) {
    Built b{m, std::nullopt};
    if (mode == BuildMode::kBestEffort || size_threshold_ok(gc, m->size())) {
      b.result = build_h(*m, gc, mode, w.certificates, mode == BuildMode::kBestEffort);
      any = true;
    }
    out.push_back(std::move(b));
  }
  if (!any) throw ConfigError("no target structure meets the size threshold; strict mode builds nothing");
  return out;
}

CommandResult run_profile(const ExperimentConfig& cfg) {
  Workspace w = prepare(cfg, false, false);
  std::vector<const ParamFormula*> all;
  for (const auto& pf : w.cover) all.push_back(&pf);
  for (const auto& pf : w.avoid) all.push_back(&pf);
  if (all.empty()) throw ConfigError("the profile command needs at least one formula");
  CommandResult res;
  json profiles = json::array();
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::vector<CountRecord> records;
    try {
      profiles.push_back(profile_json(profile_family(w.family, *all[i], w.profile, cfg.raw_counts ? &records : nullptr)));
    } catch (const NotAsymptoticError& e) {
      profiles.push_back({{"formula", all[i]->source}, {"error", e.what()}, {"offenders", e.offenders()}});
      res.exit_code = kExitCertificateFailed;
    }
    if (cfg.raw_counts) res.files["counts_" + std::to_string(i) + ".csv"] = counts_csv(records);
  }
  res.files["profile.json"] = dump(profiles);
  return res;
}

CommandResult run_build(const ExperimentConfig& cfg) {
  Workspace w = prepare(cfg, true, true);
  build_mode(cfg);
  const GreedyConfig gc = derive_config(w.cover, w.avoid, cfg.mu, w.family, w.profile);
  CommandResult res;
  json builds = json::array();
  for (const Built& b : build_targets(w, cfg, gc)) {
    if (!b.result) {
      builds.push_back({{"structure", b.m->name()},
                        {"universe", b.m->size()},
                        {"skipped", "below the size threshold"}});
      continue;
    }
    builds.push_back(build_json(b.result->h, b.result->report));
    res.files["H/" + file_stem(*b.m) + ".txt"] = h_text(b.result->h);
    if (!b.result->report.passed()) res.exit_code = kExitCertificateFailed;
  }
  res.files["build.json"] = dump({{"config", config_json(gc)}, {"builds", builds}});
  return res;
}

CommandResult run_axioms(const ExperimentConfig& cfg) {
  Workspace w = prepare(cfg, true, true);
  build_mode(cfg);
  const GreedyConfig gc = derive_config(w.cover, w.avoid, cfg.mu, w.family, w.profile);
  ExtensionOptions ext;
  ext.samples = cfg.extension_samples;
  ext.max_base = cfg.max_base;
  ext.seed = cfg.seed;
  CommandResult res;
  std::vector<AxiomReport> reports;
  json out = json::array();
  for (const Built& b : build_targets(w, cfg, gc)) {
    if (!b.result) continue;
    AxiomReport r = check_axioms(*b.m, b.result->h.elements, gc, w.certificates, ext);
    if (!r.passed()) res.exit_code = kExitCertificateFailed;
    json j = axiom_json(r);
    j["H"] = b.result->h.elements;
    out.push_back(std::move(j));
    reports.push_back(std::move(r));
  }
  res.files["axioms.json"] = dump({{"scope", kAxiomScope}, {"config", config_json(gc)}, {"reports", out}});
  res.files["axiom_failures.csv"] = axiom_failures_csv(reports);
  return res;
}

CommandResult run_sequence(const ExperimentConfig& cfg) {
  Workspace w = prepare(cfg, true, true);
  std::vector<MeasureProfile> cp, ap;
  for (const auto& pf : w.cover) cp.push_back(profile_family(w.family, pf, w.profile));
  for (const auto& pf : w.avoid) ap.push_back(profile_family(w.family, pf, w.profile));
  SequenceOptions so;
  so.mode = cfg.mode;
  so.mu = cfg.mu;
  so.certificates = w.certificates;
  SequencePlan plan = schedule_in(w.family, {w.cover, w.avoid}, cp, ap, so);
  build_sequence(plan, w.family, so);
  const CoarseDimensionSeries series = coarse_dimension_series(plan);
  CommandResult res;
  res.exit_code = plan.passed() ? kExitPass : kExitCertificateFailed;
  res.files["plan.json"] = dump(plan_json(plan));
  res.files["coarse_dim.csv"] = coarse_dimension_csv(series);
  res.files["coarse_dim.json"] = dump(coarse_dimension_json(series));
  return res;
}

CommandResult run_lovely_pair(const ExperimentConfig& cfg) {
  LovelyPairOptions opts;
  opts.sweep_all_a1 = cfg.sweep_all_a1;
  const LovelyPairSummary summary = run_experiment(cfg.lovely_primes, opts);
  CommandResult res;
  res.exit_code = summary.passed() ? kExitPass : kExitCertificateFailed;
  res.files["lovely_pair.csv"] = lovely_pair_csv(summary);
  res.files["lovely_pair.json"] = dump(lovely_pair_json(summary));
  return res;
}

}  // namespace

CommandResult execute(const std::string& command, const ExperimentConfig& config) {
  if (command == "profile") return run_profile(config);
  if (command == "build") return run_build(config);
  if (command == "sequence") return run_sequence(config);
  if (command == "axioms") return run_axioms(config);
  if (command == "lovely-pair") return run_lovely_pair(config);
  throw ConfigError("unknown command '" + command + "'");
}

int run(const RunOptions& options, std::ostream& err) {
  try {
    if (options.threads) set_thread_count(*options.threads);
    ExperimentConfig cfg = load_config(options.config);
    if (options.out) cfg.out_dir = *options.out;
    if (options.seed) cfg.seed = *options.seed;
    if (options.mode) {
      const auto mode = parse_schedule_mode(*options.mode);
      if (!mode) throw ConfigError("unknown mode '" + *options.mode + "'");
      cfg.mode = *mode;
    }
    const CommandResult res = execute(options.command, cfg);
    for (const auto& [name, content] : res.files) write_atomic(cfg.out_dir / name, content);
    if (res.exit_code == kExitCertificateFailed)
      err << "a certificate failed; reports written to " << cfg.out_dir.string() << "\n";
    return res.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace hexp::tools
