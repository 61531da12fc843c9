#include <doctest.h>

#include <cmath>

#include "bicm/gexit.hpp"
#include "oracle/scalar_bms.hpp"

using namespace bicm;

namespace {

const GridSpec kGrid{25.0, 1024};

LlrDensity gaussian_density(double mu, double var) {
  LlrDensity d(kGrid);
  const double sd = std::sqrt(var);
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mu) / sd * 0.7071067811865475); };
  for (int j = 0; j < kGrid.points(); ++j) {
    const double lo = j == 0 ? -1e30 : kGrid.value_at(j) - 0.5 * kGrid.delta();
    const double hi = j == kGrid.points() - 1 ? 1e30 : kGrid.value_at(j) + 0.5 * kGrid.delta();
    d.weights()[j] = cdf(hi) - cdf(lo);
  }
  return d;
}

}  // namespace

TEST_SUITE("gexit") {

TEST_CASE("no extrinsic information gives g = 1") {
  const ChannelSpec spec{build_constellation(Modulation::Qpsk), Fading::None, 0.9};
  const AlphaModel am(spec.constellation, spec.fading, 100'000, 11);
  const auto ext = ExtrinsicProductDensity::shared(delta_density(kGrid, DeltaKind::Zero), 2);
  Rng rng(1);
  const auto v = gexit_functional(ext, spec, am, 200'000, 1e-3, rng);
  CHECK(std::abs(v.g - 1.0) < 5.0 * v.stderr_ + 0.01);
}

TEST_CASE("perfect extrinsic information gives g = 0") {
  const ChannelSpec spec{build_constellation(Modulation::Qam16), Fading::None, 0.6};
  const AlphaModel am(spec.constellation, spec.fading, 100'000, 12);
  const auto ext =
      ExtrinsicProductDensity::shared(delta_density(kGrid, DeltaKind::PlusInfinity), 4);
  Rng rng(2);
  const auto v = gexit_functional(ext, spec, am, 50'000, 1e-3, rng);
  CHECK(std::abs(v.g) < 1e-6);
}

TEST_CASE("qpsk functional matches the scalar BPSK quadrature kernel") {
  const double sigma = 0.95;
  const ChannelSpec spec{build_constellation(Modulation::Qpsk), Fading::None, sigma};
  const AlphaModel am(spec.constellation, spec.fading, 400'000, 13);
  for (double mu : {1.5, 4.0}) {
    const auto ext_density = gaussian_density(mu, 2.0 * mu);
    const auto ext = ExtrinsicProductDensity::shared(ext_density, 2);
    Rng rng(3);
    const auto v = gexit_functional(ext, spec, am, 400'000, 1e-3, rng);

    std::vector<double> values(kGrid.points()), weights(kGrid.points());
    for (int j = 0; j < kGrid.points(); ++j) {
      values[j] = kGrid.value_at(j);
      weights[j] = ext_density.weights()[j];
    }
    const double ref = oracle::scalar_gexit_functional(values, weights, sigma);
    CHECK(std::abs(v.g - ref) < 5.0 * v.stderr_ + 0.01);
  }
}

TEST_CASE("rayleigh channel: limits still hold") {
  const ChannelSpec spec{build_constellation(Modulation::Qpsk), Fading::RayleighPerfectCsi, 0.8};
  const AlphaModel am(spec.constellation, spec.fading, 100'000, 14);
  Rng rng(4);
  const auto ext0 = ExtrinsicProductDensity::shared(delta_density(kGrid, DeltaKind::Zero), 2);
  const auto v = gexit_functional(ext0, spec, am, 200'000, 1e-3, rng);
  CHECK(std::abs(v.g - 1.0) < 5.0 * v.stderr_ + 0.015);
}

TEST_CASE("area threshold on synthetic curves") {
  // g(alpha) = alpha: tail integral (1 - a^2)/2 = rate -> a = sqrt(1-2r).
  GexitCurve curve;
  curve.bits_per_symbol = 2;
  for (int k = 0; k <= 80; ++k) {
    GexitPoint p;
    p.alpha = 0.1 + 0.01 * k;
    p.g = p.alpha;
    p.sigma = p.alpha;  // placeholder monotone map
    curve.points.push_back(p);
  }
  const auto t = area_threshold(curve, 0.3);
  CHECK(t.alpha_bar == doctest::Approx(std::sqrt(0.4)).epsilon(2e-3));

  // rate -> 0 pushes alpha_bar to 1.
  CHECK(area_threshold(curve, 0.0).alpha_bar == 1.0);

  // Truncated curve: total area below the rate.
  CHECK_THROWS_AS(area_threshold(curve, 0.9), std::runtime_error);

  GexitCurve empty;
  CHECK_THROWS_AS(area_threshold(empty, 0.5), std::invalid_argument);
}

TEST_CASE("functional rejects bad inputs") {
  const ChannelSpec spec{build_constellation(Modulation::Qpsk), Fading::None, 0.9};
  const AlphaModel am(spec.constellation, spec.fading, 50'000, 15);
  const auto ext = ExtrinsicProductDensity::shared(delta_density(kGrid, DeltaKind::Zero), 2);
  Rng rng(5);
  CHECK_THROWS_AS(gexit_functional(ext, spec, am, 100, 1e-3, rng), std::invalid_argument);
  const auto bad = ExtrinsicProductDensity::shared(delta_density(kGrid, DeltaKind::Zero), 3);
  CHECK_THROWS_AS(gexit_functional(bad, spec, am, 50'000, 1e-3, rng), std::invalid_argument);
}

}  // TEST_SUITE
