#include <benchmark/benchmark.h>

#include "hexp/asymptotics.h"
#include "hexp/hgreedy.h"
#include "hexp/lovelypair.h"

namespace {

void BM_SolutionCount(benchmark::State& state) {
  const auto m = hexp::make_prime_field(static_cast<std::uint64_t>(state.range(0)));
  const auto pf = hexp::parse_formula("exists z. z*z = x - y", m.signature(), "x", {"y"});
  const hexp::CompiledFormula cf(m, pf);
  hexp::Element y = 0;
  for (auto _ : state) {
    const hexp::Element params[] = {y};
    benchmark::DoNotOptimize(cf.count(params));
    y = static_cast<hexp::Element>((y + 1) % m.size());
  }
}
BENCHMARK(BM_SolutionCount)->Arg(101)->Arg(1009)->Arg(2003);

void BM_Profile(benchmark::State& state) {
  const auto fam = hexp::enumerate_family({hexp::FamilyKind::kPrimeField, {}, 3, static_cast<std::uint64_t>(state.range(0))});
  const auto pf = hexp::parse_formula("exists z. z*z = x - y", fam[0].signature(), "x", {"y"});
  for (auto _ : state) benchmark::DoNotOptimize(hexp::profile_family(fam, pf));
}
BENCHMARK(BM_Profile)->Arg(199)->Unit(benchmark::kMillisecond);

void BM_BuildH(benchmark::State& state) {
  const auto fam = hexp::enumerate_family({hexp::FamilyKind::kPrimeField, {}, 101, 400});
  const auto& sig = fam[0].signature();
  const auto cfg = hexp::derive_config(
      {hexp::parse_formula("exists z. z*z = x - y", sig, "x", {"y"}), hexp::parse_formula("!(x = y)", sig, "x", {"y"})},
      {hexp::parse_formula("x = z", sig, "x", {"z"}), hexp::parse_formula("x = z + 1", sig, "x", {"z"})}, 0.4, fam);
  const auto m = hexp::make_prime_field(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hexp::build_h(m, cfg, hexp::BuildMode::kBestEffort));
}
BENCHMARK(BM_BuildH)->Arg(211)->Arg(397)->Unit(benchmark::kMillisecond);

void BM_LovelyPair(benchmark::State& state) {
  const std::vector<std::uint64_t> primes{static_cast<std::uint64_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(hexp::run_experiment(primes));
}
BENCHMARK(BM_LovelyPair)->Arg(31)->Arg(43)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
