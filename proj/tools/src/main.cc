#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "hexp_tools/runner.h"

int main(int argc, char** argv) {
  CLI::App app{"Greedy H-expansion laboratory over finite structures"};
  app.require_subcommand(1);

  hexp::tools::RunOptions opts;
  std::string out, mode;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"profile", "Fit measures E, error constant C and algebraic bound B per formula"},
      {"build", "Greedy H construction with cover and avoid certificates"},
      {"sequence", "Schedule i_n across the family and build every H"},
      {"axioms", "Check independence, density and extension on built H sets"},
      {"lovely-pair", "Quadratic-character experiment over GF(p^2)/GF(p)"},
  };
  for (const auto& [name, about] : commands) {
    CLI::App* sub = app.add_subcommand(name, about);
    sub->add_option("--config", opts.config, "Experiment config (JSON)")->required();
    sub->add_option("--out", out, "Output directory, overrides out_dir");
    sub->add_option("--seed", seed, "Seed, overrides the config");
    sub->add_option("--threads", threads, "Worker thread cap");
    sub->add_option("--mode", mode, "strict | best_effort | coarse-dim");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hexp::tools::kExitConfigError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  opts.command = sub->get_name();
  if (sub->count("--out")) opts.out = out;
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--threads")) opts.threads = threads;
  if (sub->count("--mode")) opts.mode = mode;
  return hexp::tools::run(opts, std::cerr);
}
