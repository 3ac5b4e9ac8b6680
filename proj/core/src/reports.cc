#include "hexp/reports.h"

#include <fstream>
#include <sstream>

namespace hexp {

using nlohmann::json;

namespace {

std::string tuple_cell(const Tuple& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + std::to_string(t[i]);
  return s;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json cover_json(const CoverCertificate& c) {
  return {{"formula", c.formula},
          {"status", c.status()},
          {"exhaustive", c.exhaustive},
          {"checked", c.checked},
          {"failures", c.failures}};
}

json avoid_json(const AvoidCertificate& c) {
  json violations = json::array();
  for (const auto& v : c.violations) violations.push_back({{"element", v.element}, {"params", v.params}});
  return {{"formula", c.formula}, {"status", c.status()}, {"checked", c.checked}, {"violations", violations}};
}

json threshold_json(const ThresholdDiagnostics& d) {
  return {{"universe", d.universe},
          {"h_m", d.h_m},
          {"n_h_m", d.n_h_m},
          {"density_lhs", d.density_lhs},
          {"density_rhs", d.density_rhs},
          {"density_ok", d.density_ok()},
          {"room_lhs", d.room_lhs},
          {"room_rhs", d.room_rhs},
          {"room_ok", d.room_ok()},
          {"ok", d.ok()}};
}

}  // namespace

json profile_json(const MeasureProfile& p) {
  json per = json::array();
  for (const auto& s : p.per_structure)
    per.push_back({{"size", s.size},
                   {"max_residual", s.max_residual},
                   {"n_algebraic", s.n_algebraic},
                   {"n_large", s.n_large},
                   {"sampled", s.sampled}});
  return {{"formula", p.formula},
          {"arity", p.arity},
          {"E", p.measures},
          {"C", p.error_constant},
          {"B", p.algebraic_bound ? json(*p.algebraic_bound) : json(nullptr)},
          {"per_structure", per},
          {"gap", p.gap},
          {"seed", p.seed}};
}

std::string counts_csv(std::span<const CountRecord> records) {
  std::ostringstream out;
  out << "size,params,count,class\n";
  for (const auto& r : records)
    out << r.size << ',' << tuple_cell(r.params) << ',' << r.cls.count << ','
        << (r.cls.large() ? "large" : "algebraic") << '\n';
  return out.str();
}

json config_json(const GreedyConfig& cfg) {
  json cover = json::array(), avoid = json::array();
  for (const auto& p : cfg.cover_profiles) cover.push_back(p.formula);
  for (const auto& p : cfg.avoid_profiles) avoid.push_back(p.formula);
  return {{"cover", cover},
          {"avoid", avoid},
          {"mu", cfg.mu},
          {"l0", cfg.max_cover_arity},
          {"k0", cfg.max_avoid_arity},
          {"avoid_solution_bound", cfg.avoid_solution_bound},
          {"c_gamma", cfg.c_gamma},
          {"c_delta_gamma", cfg.c_delta_gamma},
          {"log", "natural"}};
}

json build_json(const HSet& h, const BuildReport& r) {
  json prov = json::array();
  for (const auto& p : h.provenance) prov.push_back({p.formula, p.step});
  json cover = json::array(), avoid = json::array(), steps = json::array();
  for (const auto& c : r.cover) cover.push_back(cover_json(c));
  for (const auto& c : r.avoid) avoid.push_back(avoid_json(c));
  for (const auto& s : r.steps)
    steps.push_back({{"formula", s.formula},
                     {"step", s.step},
                     {"element", s.element},
                     {"y_before", s.y_before},
                     {"y_after", s.y_after},
                     {"shrink", s.shrink()},
                     {"bound_applies", s.bound_applies},
                     {"shrink_ok", s.shrink_ok}});
  return {{"structure", r.structure},
          {"universe", r.universe},
          {"mode", std::string(mode_name(r.mode))},
          {"passed", r.passed()},
          {"error", r.error ? json(*r.error) : json(nullptr)},
          {"H", h.elements},
          {"provenance", prov},
          {"size", h.size()},
          {"size_bound", r.size_bound},
          {"size_bound_ok", r.size_bound_ok},
          {"threshold", threshold_json(r.threshold)},
          {"cover", cover},
          {"avoid", avoid},
          {"shrink_violations", r.shrink_violations},
          {"steps", steps}};
}

std::string h_text(const HSet& h) {
  std::string out;
  for (Element e : h.elements) out += std::to_string(e) + "\n";
  return out;
}

json plan_json(const SequencePlan& plan) {
  json configs = json::array(), entries = json::array();
  for (const auto& c : plan.configs) configs.push_back(config_json(c));
  for (const auto& e : plan.entries) {
    json j = {{"structure", e.structure},
              {"size", e.size},
              {"i_n", e.i_n ? json(*e.i_n) : json(nullptr)},
              {"H", e.h.elements}};
    if (e.report) j["report"] = build_json(e.h, *e.report);
    entries.push_back(std::move(j));
  }
  return {{"mode", std::string(schedule_mode_name(plan.mode))},
          {"mu", plan.mu},
          {"passed", plan.passed()},
          {"configs", configs},
          {"entries", entries}};
}

std::string coarse_dimension_csv(const CoarseDimensionSeries& series) {
  std::ostringstream out;
  out.precision(17);
  out << "size,h_size,ratio\n";
  for (const auto& p : series.points) out << p.size << ',' << p.h_size << ',' << p.ratio << '\n';
  return out.str();
}

json coarse_dimension_json(const CoarseDimensionSeries& s) {
  return {{"first_ratio", s.first_ratio},
          {"last_ratio", s.last_ratio},
          {"window", s.window},
          {"first_window", s.first_window ? json(*s.first_window) : json(nullptr)},
          {"last_window", s.last_window ? json(*s.last_window) : json(nullptr)},
          {"non_increasing", s.non_increasing()},
          {"strictly_decreasing", s.strictly_decreasing()}};
}

json axiom_json(const AxiomReport& r) {
  json ordered = json::array(), witnesses = json::array(), density = json::array(), ext_fail = json::array();
  for (const auto& c : r.independence.ordered) ordered.push_back(avoid_json(c));
  for (const auto& w : r.independence.symmetric_witnesses)
    witnesses.push_back({{"element", w.element}, {"params", w.params}});
  for (const auto& c : r.density.per_formula) density.push_back(cover_json(c));
  for (const auto& f : r.extension.failures)
    ext_fail.push_back({{"formula", f.formula}, {"params", f.params}, {"base", f.base}});
  return {{"scope", r.scope},
          {"structure", r.structure},
          {"passed", r.passed()},
          {"independence",
           {{"passed", r.independence.passed()},
            {"ordered", ordered},
            {"symmetric_checked", r.independence.symmetric_checked},
            {"symmetric_witnesses", witnesses}}},
          {"density", {{"passed", r.density.passed()}, {"failures", r.density.failures()}, {"per_formula", density}}},
          {"extension",
           {{"passed", r.extension.passed()},
            {"sampled", r.extension.sampled},
            {"skipped", r.extension.skipped},
            {"seed", r.extension.seed},
            {"max_base", r.extension.max_base},
            {"min_large_count", r.extension.min_large_count},
            {"max_closure", r.extension.max_closure},
            {"sufficient_condition", r.extension.sufficient_condition()},
            {"failures", ext_fail}}}};
}

std::string axiom_failures_csv(std::span<const AxiomReport> reports) {
  std::ostringstream out;
  out << "structure,check,formula,params,detail\n";
  for (const auto& r : reports) {
    for (const auto& c : r.independence.ordered)
      for (const auto& v : c.violations)
        out << r.structure << ",independence," << csv_quote(c.formula) << ',' << tuple_cell(v.params) << ','
            << v.element << '\n';
    for (const auto& c : r.density.per_formula)
      for (const auto& t : c.failures)
        out << r.structure << ",density," << csv_quote(c.formula) << ',' << tuple_cell(t) << ",\n";
    for (const auto& f : r.extension.failures)
      out << r.structure << ",extension," << f.formula << ',' << tuple_cell(f.params) << ','
          << tuple_cell(f.base) << '\n';
  }
  return out.str();
}

std::string lovely_pair_csv(const LovelyPairSummary& s) {
  std::ostringstream out;
  out.precision(17);
  out << "p,q,phi_count,q_over_4,deviation,violations,a1,a2\n";
  for (const auto& r : s.reports)
    out << r.p << ',' << r.q << ',' << r.phi_count << ',' << r.q_over_4() << ',' << r.deviation() << ','
        << r.subfield_violations << ',' << r.a1 << ',' << r.a2 << '\n';
  return out.str();
}

json lovely_pair_json(const LovelyPairSummary& s) {
  json reports = json::array();
  for (const auto& r : s.reports)
    reports.push_back({{"p", r.p},
                       {"q", r.q},
                       {"a1", r.a1},
                       {"a2", r.a2},
                       {"phi_count", r.phi_count},
                       {"q_over_4", r.q_over_4()},
                       {"deviation", r.deviation()},
                       {"envelope", deviation_envelope(r.q)},
                       {"violations", r.subfield_violations},
                       {"patterns", {{"SS", r.patterns.ss}, {"SN", r.patterns.sn}, {"NS", r.patterns.ns}, {"NN", r.patterns.nn}}}});
  return {{"all_violations_zero", s.all_violations_zero()},
          {"all_large", s.all_large()},
          {"all_within_envelope", s.all_within_envelope()},
          {"reports", reports}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace hexp
