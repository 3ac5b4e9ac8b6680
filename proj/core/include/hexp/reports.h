#ifndef HEXP_REPORTS_H_
#define HEXP_REPORTS_H_

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "hexp/asymptotics.h"
#include "hexp/haxioms.h"
#include "hexp/hgreedy.h"
#include "hexp/hsequence.h"
#include "hexp/lovelypair.h"

namespace hexp {

nlohmann::json profile_json(const MeasureProfile& profile);
std::string counts_csv(std::span<const CountRecord> records);

nlohmann::json config_json(const GreedyConfig& cfg);
nlohmann::json build_json(const HSet& h, const BuildReport& report);
std::string h_text(const HSet& h);

nlohmann::json plan_json(const SequencePlan& plan);
std::string coarse_dimension_csv(const CoarseDimensionSeries& series);
nlohmann::json coarse_dimension_json(const CoarseDimensionSeries& series);

nlohmann::json axiom_json(const AxiomReport& report);
// One row per failure: structure, check, formula, params, detail.
std::string axiom_failures_csv(std::span<const AxiomReport> reports);

std::string lovely_pair_csv(const LovelyPairSummary& summary);
nlohmann::json lovely_pair_json(const LovelyPairSummary& summary);

// Two-space indented JSON with a trailing newline.
std::string dump(const nlohmann::json& j);

// Writes through a temporary file in the same directory and renames it over
// `path`, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace hexp

#endif  // HEXP_REPORTS_H_
