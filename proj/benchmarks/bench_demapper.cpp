#include <benchmark/benchmark.h>

#include "bicm/demapper.hpp"

namespace {

using namespace bicm;

void BM_BitLlr(benchmark::State& state) {
  const auto c = build_constellation(state.range(0) == 2   ? Modulation::Qpsk
                                     : state.range(0) == 4 ? Modulation::Qam16
                                                           : Modulation::Qam64);
  const ChannelObservation obs{{0.4, -0.7}, {1.0, 0.0}};
  const auto prior = PriorVector::all_zero(c.bits_per_symbol);
  for (auto _ : state)
    benchmark::DoNotOptimize(bit_llr(DemapperKind::MapOptimal, c, obs, 0.6, 0, prior));
}
BENCHMARK(BM_BitLlr)->Arg(2)->Arg(4)->Arg(6);

void BM_PhiBundle(benchmark::State& state) {
  const auto c = build_constellation(state.range(0) == 2   ? Modulation::Qpsk
                                     : state.range(0) == 4 ? Modulation::Qam16
                                                           : Modulation::Qam64);
  const GridSpec grid{30.0, 2048};
  const auto incoming = delta_density(grid, DeltaKind::Zero);
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(demapper_density_bundle(DemapperKind::MapOptimal, c, Fading::None,
                                                     0.6, incoming, 200'000, rng));
  }
}
BENCHMARK(BM_PhiBundle)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
