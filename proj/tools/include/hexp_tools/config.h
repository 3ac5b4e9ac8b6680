#ifndef HEXP_TOOLS_CONFIG_H_
#define HEXP_TOOLS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hexp/finitemodels.h"
#include "hexp/hsequence.h"

namespace hexp::tools {

// A formula as written in the config: the text plus optional explicit object
// and parameter variables.
struct FormulaEntry {
  std::string text;
  std::optional<std::string> object;
  std::optional<std::vector<std::string>> params;
};

struct ExperimentConfig {
  std::optional<FamilySpec> family;
  // Family parameters to build on; every member when empty.
  std::vector<std::uint64_t> targets;
  std::vector<FormulaEntry> cover;
  std::vector<FormulaEntry> avoid;
  std::optional<double> mu;
  double gap = 0.05;
  double c_ceiling = 10.0;
  std::uint64_t seed = 1;
  std::size_t profile_samples = 10000;
  double enumeration_bits = 24.0;
  std::size_t certificate_samples = 10000;
  std::size_t extension_samples = 1000;
  std::size_t max_base = 3;
  bool raw_counts = false;
  std::filesystem::path out_dir = "out";
  ScheduleMode mode = ScheduleMode::kStrict;
  std::vector<std::uint64_t> lovely_primes;
  bool sweep_all_a1 = false;
};

// Parses the whole document; unknown keys and wrong types raise
// ConfigError naming the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace hexp::tools

#endif  // HEXP_TOOLS_CONFIG_H_
