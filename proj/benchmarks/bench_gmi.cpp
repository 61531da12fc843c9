#include <benchmark/benchmark.h>

#include "bicm/gmi.hpp"

namespace {

using namespace bicm;

void BM_ICurve(benchmark::State& state) {
  const ChannelSpec spec{build_constellation(state.range(0) == 2   ? Modulation::Qpsk
                                             : state.range(0) == 4 ? Modulation::Qam16
                                                                   : Modulation::Qam64),
                         Fading::None, 0.6};
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(i_curve(spec, DemapperKind::MapOptimal, 1.0, 200'000, rng));
  }
}
BENCHMARK(BM_ICurve)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Gmi(benchmark::State& state) {
  const ChannelSpec spec{build_constellation(Modulation::Qam16), Fading::None, 0.6};
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(gmi(spec, DemapperKind::MaxLogMap, 200'000, rng));
  }
}
BENCHMARK(BM_Gmi)->Unit(benchmark::kMillisecond);

}  // namespace
