#include <benchmark/benchmark.h>

#include "bicm/density.hpp"
#include "bicm/profile.hpp"
#include "bicm/rng.hpp"

namespace {

using namespace bicm;

LlrDensity spread_density(const GridSpec& grid, std::uint64_t seed) {
  Rng rng(seed);
  LlrDensity d(grid);
  for (int k = 0; k < 2000; ++k)
    d.deposit((rng.uniform() - 0.35) * 1.6 * grid.max_llr, rng.uniform_pos());
  d.scale(1.0 / d.total_mass());
  return d;
}

void BM_ChkConv(benchmark::State& state) {
  const GridSpec grid{30.0, static_cast<int>(state.range(0))};
  const auto a = spread_density(grid, 1);
  const auto b = spread_density(grid, 2);
  chk_conv(a, b);  // warm the requantization table
  for (auto _ : state) benchmark::DoNotOptimize(chk_conv(a, b));
}
BENCHMARK(BM_ChkConv)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_VarConv(benchmark::State& state) {
  const GridSpec grid{30.0, static_cast<int>(state.range(0))};
  const auto a = spread_density(grid, 3);
  const auto b = spread_density(grid, 4);
  var_conv(a, b);
  for (auto _ : state) benchmark::DoNotOptimize(var_conv(a, b));
}
BENCHMARK(BM_VarConv)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_DeIteration36(benchmark::State& state) {
  // One flat (3,6) iteration: rho = a^{[+]5}, lambda = rho^{(*)2}, channel (*).
  const GridSpec grid{30.0, static_cast<int>(state.range(0))};
  const auto profile = DegreeProfile::regular(3, 6);
  const auto chan = spread_density(grid, 5);
  LlrDensity a = chan;
  for (auto _ : state) {
    const auto rho = apply_profile(profile, ProfileSide::ChkEdge, a);
    const auto lam = apply_profile(profile, ProfileSide::VarEdge, rho);
    a = var_conv(chan, lam);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_DeIteration36)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace
