#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hexp/reports.h"

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hexp_reports_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Reports, ProfileJsonShape) {
  const auto fam = hexp::enumerate_family({hexp::FamilyKind::kPrimeField, {}, 5, 30});
  const auto prof = hexp::profile_family(fam, hexp::parse_formula("x = y", fam[0].signature()));
  const auto j = hexp::profile_json(prof);
  for (const char* key : {"formula", "E", "C", "B", "per_structure", "gap", "seed"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["B"], 1);
  EXPECT_EQ(j["per_structure"].size(), fam.size());
  EXPECT_TRUE(j["per_structure"][0].contains("max_residual"));
}

TEST(Reports, BuildJsonAndHText) {
  const auto fam = hexp::enumerate_family({hexp::FamilyKind::kCyclicGroup, {}, 5, 40});
  const auto& sig = fam[0].signature();
  const auto cfg = hexp::derive_config({hexp::parse_formula("!(x = y)", sig, "x", {"y"})},
                                       {hexp::parse_formula("x = z", sig, "x", {"z"})}, 0.9, fam);
  const auto z13 = hexp::make_cyclic_group(13);
  const auto r = hexp::build_h(z13, cfg, hexp::BuildMode::kBestEffort);
  const auto j = hexp::build_json(r.h, r.report);
  EXPECT_EQ(j["H"], nlohmann::json::array({0, 1}));
  EXPECT_EQ(j["provenance"][1], nlohmann::json::array({0, 1}));
  EXPECT_EQ(j["cover"][0]["status"], "exhaustive-pass");
  EXPECT_EQ(j["mode"], "best_effort");
  EXPECT_FALSE(j["threshold"]["ok"]);
  EXPECT_EQ(j["steps"].size(), 2u);
  EXPECT_EQ(hexp::h_text(r.h), "0\n1\n");
  EXPECT_EQ(hexp::config_json(cfg)["log"], "natural");
}

TEST(Reports, LovelyPairCsv) {
  const auto s = hexp::run_experiment(std::vector<std::uint64_t>{3, 5});
  const std::string csv = hexp::lovely_pair_csv(s);
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, "p,q,phi_count,q_over_4,deviation,violations,a1,a2");
  std::getline(in, row);
  EXPECT_EQ(row.substr(0, 4), "3,9,");
}

TEST(Reports, CoarseDimensionCsv) {
  hexp::CoarseDimensionSeries s;
  s.points = {{13, 2, hexp::coarse_ratio(2, 13)}, {17, 0, 0.0}};
  const std::string csv = hexp::coarse_dimension_csv(s);
  EXPECT_EQ(csv.substr(0, 17), "size,h_size,ratio");
  EXPECT_NE(csv.find("\n17,0,0\n"), std::string::npos);
}

TEST(Reports, AtomicWriteReplacesWholeFile) {
  const fs::path dir = scratch_dir("atomic");
  const fs::path target = dir / "nested" / "a.json";
  hexp::write_atomic(target, "first\n");
  hexp::write_atomic(target, "second\n");
  EXPECT_EQ(slurp(target), "second\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(target.parent_path())) ++files;
  EXPECT_EQ(files, 1u);
  fs::remove_all(dir);
}

TEST(Reports, CsvQuotesFormulasWithCommas) {
  hexp::AxiomReport r;
  r.structure = "GF(7)";
  hexp::CoverCertificate c;
  c.formula = "R(x, y)";
  c.failures = {{3}};
  r.density.per_formula.push_back(c);
  const std::vector<hexp::AxiomReport> rs{r};
  EXPECT_NE(hexp::axiom_failures_csv(rs).find("GF(7),density,\"R(x, y)\",3,"), std::string::npos);
}

}  // namespace
