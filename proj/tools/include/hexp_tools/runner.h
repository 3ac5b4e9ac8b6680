#ifndef HEXP_TOOLS_RUNNER_H_
#define HEXP_TOOLS_RUNNER_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "hexp_tools/config.h"

namespace hexp::tools {

enum ExitCode : int { kExitPass = 0, kExitCertificateFailed = 1, kExitConfigError = 2 };

struct RunOptions {
  std::string command;
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> mode;
};

// Report files produced by one command, keyed by path relative to the
// output directory.
using ReportFiles = std::map<std::string, std::string>;

struct CommandResult {
  int exit_code = kExitPass;
  ReportFiles files;
};

// Runs a command on an already parsed config and returns the reports in
// memory. Throws hexp::Error on configuration or construction problems.
CommandResult execute(const std::string& command, const ExperimentConfig& config);

// Full front end: loads the config, applies overrides, runs, writes every
// report atomically, and maps errors to exit codes with a diagnostic on err.
int run(const RunOptions& options, std::ostream& err);

}  // namespace hexp::tools

#endif  // HEXP_TOOLS_RUNNER_H_
