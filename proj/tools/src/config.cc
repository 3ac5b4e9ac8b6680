#include "hexp_tools/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hexp::tools {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  return j;
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

std::uint64_t get_unsigned(const json& j, const std::string& key) {
  if (!j.is_number_unsigned()) throw ConfigError("'" + key + "' must be a non-negative integer");
  return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) throw ConfigError("'" + key + "' must be true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("'" + key + "' must be a string");
  return j.get<std::string>();
}

std::vector<std::uint64_t> get_unsigned_list(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("'" + key + "' must be a list of integers");
  std::vector<std::uint64_t> out;
  for (const auto& e : j) out.push_back(get_unsigned(e, key));
  return out;
}

FamilySpec parse_family(const json& j) {
  require_object(j, "'family'");
  reject_unknown(j, {"kind", "parameters", "min", "max"}, "'family'");
  if (!j.contains("kind")) throw ConfigError("'family' needs a 'kind'");
  const std::string kind = get_string(j["kind"], "family.kind");
  const auto parsed = parse_family_kind(kind);
  if (!parsed) throw ConfigError("unknown family kind '" + kind + "'");
  FamilySpec spec;
  spec.kind = *parsed;
  if (j.contains("parameters")) spec.parameters = get_unsigned_list(j["parameters"], "family.parameters");
  if (j.contains("min")) spec.min = get_unsigned(j["min"], "family.min");
  if (j.contains("max")) spec.max = get_unsigned(j["max"], "family.max");
  if (!spec.parameters.empty() && (spec.min || spec.max))
    throw ConfigError("'family' takes either 'parameters' or 'min'/'max', not both");
  if (spec.parameters.empty() && !(spec.min && spec.max))
    throw ConfigError("'family' needs 'parameters' or both 'min' and 'max'");
  return spec;
}

std::vector<FormulaEntry> parse_formulas(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("'" + key + "' must be a list of formulas");
  std::vector<FormulaEntry> out;
  for (const auto& e : j) {
    FormulaEntry f;
    if (e.is_string()) {
      f.text = e.get<std::string>();
    } else if (e.is_object()) {
      reject_unknown(e, {"formula", "object", "params"}, "a '" + key + "' entry");
      if (!e.contains("formula")) throw ConfigError("a '" + key + "' entry needs 'formula'");
      f.text = get_string(e["formula"], key + ".formula");
      if (e.contains("object")) f.object = get_string(e["object"], key + ".object");
      if (e.contains("params")) {
        if (!e["params"].is_array()) throw ConfigError("'" + key + ".params' must be a list of names");
        std::vector<std::string> params;
        for (const auto& p : e["params"]) params.push_back(get_string(p, key + ".params"));
        f.params = std::move(params);
      }
    } else {
      throw ConfigError("'" + key + "' entries must be strings or objects");
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(doc, "the config");
  reject_unknown(doc,
                 {"family", "targets", "cover", "avoid", "mu", "gap", "c_ceiling", "seed", "profile_samples",
                  "enumeration_bits", "certificate_samples", "extension_samples", "max_base", "raw_counts",
                  "out_dir", "mode", "lovely_pair"},
                 "the config");

  ExperimentConfig cfg;
  if (doc.contains("family")) cfg.family = parse_family(doc["family"]);
  if (doc.contains("targets")) cfg.targets = get_unsigned_list(doc["targets"], "targets");
  if (doc.contains("cover")) cfg.cover = parse_formulas(doc["cover"], "cover");
  if (doc.contains("avoid")) cfg.avoid = parse_formulas(doc["avoid"], "avoid");
  if (doc.contains("mu")) cfg.mu = get_number(doc["mu"], "mu");
  if (doc.contains("gap")) cfg.gap = get_number(doc["gap"], "gap");
  if (doc.contains("c_ceiling")) cfg.c_ceiling = get_number(doc["c_ceiling"], "c_ceiling");
  if (doc.contains("seed")) cfg.seed = get_unsigned(doc["seed"], "seed");
  if (doc.contains("profile_samples")) cfg.profile_samples = get_unsigned(doc["profile_samples"], "profile_samples");
  if (doc.contains("enumeration_bits")) cfg.enumeration_bits = get_number(doc["enumeration_bits"], "enumeration_bits");
  if (doc.contains("certificate_samples"))
    cfg.certificate_samples = get_unsigned(doc["certificate_samples"], "certificate_samples");
  if (doc.contains("extension_samples"))
    cfg.extension_samples = get_unsigned(doc["extension_samples"], "extension_samples");
  if (doc.contains("max_base")) cfg.max_base = get_unsigned(doc["max_base"], "max_base");
  if (doc.contains("raw_counts")) cfg.raw_counts = get_bool(doc["raw_counts"], "raw_counts");
  if (doc.contains("out_dir")) cfg.out_dir = get_string(doc["out_dir"], "out_dir");
  if (doc.contains("mode")) {
    const std::string mode = get_string(doc["mode"], "mode");
    const auto parsed = parse_schedule_mode(mode);
    if (!parsed) throw ConfigError("unknown mode '" + mode + "'");
    cfg.mode = *parsed;
  }
  if (doc.contains("lovely_pair")) {
    const json& lp = require_object(doc["lovely_pair"], "'lovely_pair'");
    reject_unknown(lp, {"primes", "sweep_all_a1"}, "'lovely_pair'");
    if (lp.contains("primes")) cfg.lovely_primes = get_unsigned_list(lp["primes"], "lovely_pair.primes");
    if (lp.contains("sweep_all_a1")) cfg.sweep_all_a1 = get_bool(lp["sweep_all_a1"], "lovely_pair.sweep_all_a1");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace hexp::tools
