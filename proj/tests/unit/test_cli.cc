#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hexp/parallel.h"
#include "hexp_tools/config.h"
#include "hexp_tools/runner.h"

namespace {

namespace fs = std::filesystem;
using hexp::tools::parse_config;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hexp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

int run(const std::string& command, const fs::path& config, const fs::path& out, std::string* err = nullptr,
        std::optional<unsigned> threads = std::nullopt) {
  hexp::tools::RunOptions o;
  o.command = command;
  o.config = config;
  o.out = out;
  o.threads = threads;
  std::ostringstream e;
  const int code = hexp::tools::run(o, e);
  if (err) *err = e.str();
  return code;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[fs::relative(e.path(), dir).string()] = s.str();
  }
  return out;
}

constexpr const char* kSmallBuild = R"j({
  "family": {"kind": "prime-field", "min": 53, "max": 101},
  "targets": [101],
  "cover": [{"formula": "exists z. z*z = x - y", "object": "x", "params": ["y"]}],
  "avoid": [{"formula": "x = z", "params": ["z"]}],
  "mu": 0.4,
  "mode": "best_effort",
  "extension_samples": 100
})j";

TEST(Config, ParsesEveryKey) {
  const auto cfg = parse_config(R"j({
    "family": {"kind": "cyclic-group", "parameters": [5, 7]},
    "targets": [7], "cover": ["!(x = y)"], "avoid": [{"formula": "x = z", "object": "x", "params": ["z"]}],
    "mu": 0.3, "gap": 0.1, "c_ceiling": 4, "seed": 9, "profile_samples": 10, "enumeration_bits": 12,
    "certificate_samples": 11, "extension_samples": 12, "max_base": 2, "raw_counts": true,
    "out_dir": "o", "mode": "coarse-dim", "lovely_pair": {"primes": [3], "sweep_all_a1": true}})j");
  ASSERT_TRUE(cfg.family);
  EXPECT_EQ(cfg.family->parameters, (std::vector<std::uint64_t>{5, 7}));
  EXPECT_EQ(cfg.cover.size(), 1u);
  EXPECT_EQ(*cfg.avoid[0].params, (std::vector<std::string>{"z"}));
  EXPECT_EQ(cfg.mode, hexp::ScheduleMode::kCoarseDim);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_TRUE(cfg.sweep_all_a1);
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(parse_config(R"j({"famly": {}})j"), hexp::ConfigError);
  EXPECT_THROW(parse_config(R"j({"family": {"kind": "prime-field", "min": 5, "max": 9, "step": 2}})j"),
               hexp::ConfigError);
  EXPECT_THROW(parse_config(R"j({"lovely_pair": {"prime": [3]}})j"), hexp::ConfigError);
  EXPECT_THROW(parse_config(R"j({"cover": [{"text": "x = y"}]})j"), hexp::ConfigError);
  EXPECT_THROW(parse_config(R"j({"seed": -1})j"), hexp::ConfigError);
  EXPECT_THROW(parse_config(R"j({"mu": "0.4"})j"), hexp::ConfigError);
  EXPECT_THROW(parse_config(R"j({"mode": "fast"})j"), hexp::ConfigError);
  EXPECT_THROW(parse_config(R"j({"family": {"kind": "ring", "min": 1, "max": 2}})j"), hexp::ConfigError);
  EXPECT_THROW(parse_config("{"), hexp::ConfigError);
  EXPECT_THROW(parse_config("[]"), hexp::ConfigError);
}

TEST(Cli, BuildOnGf101) {
  const fs::path dir = scratch_dir("build");
  const fs::path out = dir / "out";
  EXPECT_EQ(run("build", write_config(dir, kSmallBuild), out), 0);
  EXPECT_TRUE(fs::exists(out / "build.json"));
  EXPECT_TRUE(fs::exists(out / "H" / "prime-field_101.txt"));
}

TEST(Cli, LovelyPairRejectsTwo) {
  const fs::path dir = scratch_dir("lovely2");
  const fs::path out = dir / "out";
  std::string err;
  EXPECT_EQ(run("lovely-pair", write_config(dir, R"j({"lovely_pair": {"primes": [2, 3]}})j"), out, &err), 2);
  EXPECT_NE(err.find("p = 2"), std::string::npos);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, ConfigErrorsExitTwoWithoutFiles) {
  const fs::path dir = scratch_dir("errors");
  const fs::path out = dir / "out";
  EXPECT_EQ(run("build", write_config(dir, R"j({"bogus": 1})j"), out), 2);
  EXPECT_EQ(run("build", dir / "missing.json", out), 2);
  EXPECT_EQ(run("explode", write_config(dir, kSmallBuild), out), 2);
  EXPECT_EQ(run("build", write_config(dir, R"j({"family": {"kind": "prime-field", "min": 24, "max": 28},
    "cover": ["!(x = y)"], "avoid": ["x = z"]})j"), out), 2);
  // Strict mode below every threshold builds nothing.
  std::string strict = kSmallBuild;
  strict.replace(strict.find("best_effort"), 11, "strict");
  EXPECT_EQ(run("build", write_config(dir, strict), out), 2);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, ProfileCommandWritesProfiles) {
  const fs::path dir = scratch_dir("profile");
  const fs::path out = dir / "out";
  EXPECT_EQ(run("profile", write_config(dir, R"j({"family": {"kind": "cyclic-group", "min": 5, "max": 30},
    "cover": ["exists z. x = y + z + z"], "raw_counts": true})j"), out), 0);
  EXPECT_TRUE(fs::exists(out / "profile.json"));
  EXPECT_TRUE(fs::exists(out / "counts_0.csv"));
}

TEST(Cli, ProfileFailureExitsOne) {
  const fs::path dir = scratch_dir("profile_fail");
  const fs::path out = dir / "out";
  EXPECT_EQ(run("profile", write_config(dir, R"j({"family": {"kind": "prime-field", "min": 5, "max": 60},
    "cover": ["exists z. z*z = x - y"], "c_ceiling": 0.1})j"), out), 1);
  EXPECT_TRUE(fs::exists(out / "profile.json"));
}

TEST(Cli, CertificateFailureExitsOne) {
  const fs::path dir = scratch_dir("cert_fail");
  const fs::path out = dir / "out";
  // Z_1 runs out of eligible elements: best_effort records the error.
  EXPECT_EQ(run("build", write_config(dir, R"j({"family": {"kind": "cyclic-group", "parameters": [1, 20, 30, 40]},
    "targets": [1], "cover": ["x = x & y = y"], "avoid": [{"formula": "x = zero", "params": []}], "mu": 0.5,
    "mode": "best_effort"})j"), out), 1);
  EXPECT_TRUE(fs::exists(out / "build.json"));
}

TEST(Cli, EveryCommandIsDeterministicAcrossThreadCounts) {
  const fs::path dir = scratch_dir("determinism");
  const fs::path cfg = write_config(dir, R"j({
    "family": {"kind": "prime-field", "min": 101, "max": 160},
    "cover": ["exists z. z*z = x - y", "!(x = y)"],
    "avoid": [{"formula": "x = z", "params": ["z"]}, {"formula": "x = z + 1", "params": ["z"]}],
    "mu": 0.4, "mode": "best_effort", "extension_samples": 200,
    "lovely_pair": {"primes": [3, 5, 7]}})j");
  for (const char* command : {"profile", "build", "sequence", "axioms", "lovely-pair"}) {
    const fs::path a = dir / (std::string(command) + "_a");
    const fs::path b = dir / (std::string(command) + "_b");
    ASSERT_EQ(run(command, cfg, a, nullptr, 1u), 0) << command;
    ASSERT_EQ(run(command, cfg, b, nullptr, 8u), 0) << command;
    EXPECT_EQ(read_tree(a), read_tree(b)) << command;
  }
  hexp::set_thread_count(0);
}

}  // namespace
