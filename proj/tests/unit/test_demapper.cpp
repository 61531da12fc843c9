#include <doctest.h>

#include <cmath>

#include "bicm/demapper.hpp"
#include "bicm/mathutil.hpp"

using namespace bicm;

namespace {

const GridSpec kGrid{30.0, 2048};

// Direct transcription of the demapper message: prior-weighted likelihood
// sums over the two halves of the bit partition. Slow and simple; the
// production path must agree with it.
double reference_bit_llr(const Constellation& c, std::complex<double> y, std::complex<double> a,
                         double sigma, int m, const std::vector<double>& prior_llr) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    double p = std::exp(-std::norm(y - a * c.symbols[i]) / (sigma * sigma));
    for (int l = 0; l < c.bits_per_symbol; ++l) {
      if (l == m) continue;
      const double v = prior_llr[l];
      p *= c.bit_of(i, l) == 0 ? std::exp(v) / (1.0 + std::exp(v)) : 1.0 / (1.0 + std::exp(v));
    }
    (c.bit_of(i, m) == 0 ? num : den) += p;
  }
  return std::log(num / den);
}

}  // namespace

TEST_SUITE("demapper") {

TEST_CASE("qpsk closed form: llr = 2 sqrt(2) Re(y) / sigma^2") {
  const auto c = build_constellation(Modulation::Qpsk);
  const auto prior = PriorVector::all_zero(2);
  Rng rng(1);
  for (double sigma : {1.0, 0.7, 1.3}) {
    for (int t = 0; t < 50; ++t) {
      const ChannelObservation obs{{(rng.uniform() - 0.5) * 3, (rng.uniform() - 0.5) * 3},
                                   {1.0, 0.0}};
      const double expect_re = 2.0 * std::sqrt(2.0) * obs.y.real() / (sigma * sigma);
      const double expect_im = 2.0 * std::sqrt(2.0) * obs.y.imag() / (sigma * sigma);
      CHECK(bit_llr(DemapperKind::MapOptimal, c, obs, sigma, 0, prior) ==
            doctest::Approx(expect_re).epsilon(1e-9));
      CHECK(bit_llr(DemapperKind::MapOptimal, c, obs, sigma, 1, prior) ==
            doctest::Approx(expect_im).epsilon(1e-9));
    }
  }
  // The spec's hand value: Re(y)=1/sqrt(2), sigma^2=1 -> LLR = 2.
  const ChannelObservation obs{{1.0 / std::sqrt(2.0), 0.2}, {1.0, 0.0}};
  CHECK(bit_llr(DemapperKind::MapOptimal, c, obs, 1.0, 0, prior) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("qpsk: max-log equals MAP exactly, with and without priors") {
  const auto c = build_constellation(Modulation::Qpsk);
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const ChannelObservation obs{{(rng.uniform() - 0.5) * 4, (rng.uniform() - 0.5) * 4},
                                 {1.0, 0.0}};
    const PriorVector prior(t % 2 == 0
                                ? std::vector<double>{0.0, 0.0}
                                : std::vector<double>{(rng.uniform() - 0.5) * 8,
                                                      (rng.uniform() - 0.5) * 8});
    for (int m = 0; m < 2; ++m) {
      const double map = bit_llr(DemapperKind::MapOptimal, c, obs, 0.9, m, prior);
      const double mlm = bit_llr(DemapperKind::MaxLogMap, c, obs, 0.9, m, prior);
      CHECK(map == doctest::Approx(mlm).epsilon(1e-9));
    }
  }
}

TEST_CASE("matches the direct reference with random priors (16qam)") {
  const auto c = build_constellation(Modulation::Qam16);
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const ChannelObservation obs{{(rng.uniform() - 0.5) * 3, (rng.uniform() - 0.5) * 3},
                                 {0.8, -0.4}};
    std::vector<double> prior(4);
    for (auto& v : prior) v = (rng.uniform() - 0.5) * 10;
    for (int m = 0; m < 4; ++m) {
      const double got = bit_llr(DemapperKind::MapOptimal, c, obs, 0.8, m, PriorVector(prior));
      const double ref = reference_bit_llr(c, obs.y, obs.a, 0.8, m, prior);
      CHECK(got == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("infinite priors reduce to the genie symbol pair") {
  const auto c = build_constellation(Modulation::Qam16);
  Rng rng(4);
  const double sigma = 0.8;
  for (int t = 0; t < 50; ++t) {
    const int sym = static_cast<int>(rng.uniform_int(16));
    const ChannelObservation obs{{(rng.uniform() - 0.5) * 3, (rng.uniform() - 0.5) * 3},
                                 {1.0, 0.0}};
    for (int m = 0; m < 4; ++m) {
      std::vector<double> prior(4);
      for (int l = 0; l < 4; ++l)
        prior[l] = l == m ? 0.0 : (c.bit_of(sym, l) == 0 ? HUGE_VAL : -HUGE_VAL);
      const double got = bit_llr(DemapperKind::MapOptimal, c, obs, sigma, m, PriorVector(prior));
      // Only the two symbols consistent with the pinned bits survive.
      int x0 = -1, x1 = -1;
      for (int i = 0; i < 16; ++i) {
        bool match = true;
        for (int l = 0; l < 4; ++l)
          if (l != m && c.bit_of(i, l) != c.bit_of(sym, l)) match = false;
        if (!match) continue;
        (c.bit_of(i, m) == 0 ? x0 : x1) = i;
      }
      const double ref = (-std::norm(obs.y - c.symbols[x0]) +
                          std::norm(obs.y - c.symbols[x1])) / (sigma * sigma);
      CHECK(got == doctest::Approx(ref).epsilon(1e-9));
    }
  }
  const ChannelObservation bad{{HUGE_VAL, 0.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(bit_llr(DemapperKind::MapOptimal, c, bad, 1.0, 0, PriorVector::all_zero(4)),
                  std::invalid_argument);
}

TEST_CASE("phi for qpsk is the BPSK Gaussian: mean 2/s^2, var 4/s^2") {
  const auto c = build_constellation(Modulation::Qpsk);
  const double sigma = 0.9;
  const auto incoming = delta_density(kGrid, DeltaKind::Zero);
  Rng rng(5);
  const auto d =
      demapper_density(DemapperKind::MapOptimal, c, Fading::None, sigma, 0, incoming, 400'000, rng);
  CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  const double mean = d.finite_mean();
  double var = 0.0;
  for (int j = 0; j < kGrid.points(); ++j) {
    const double x = kGrid.value_at(j) - mean;
    var += d.weights()[j] * x * x;
  }
  const double mu = 2.0 / (sigma * sigma);
  CHECK(mean == doctest::Approx(mu).epsilon(0.01));
  CHECK(var == doctest::Approx(2.0 * mu).epsilon(0.02));
}

TEST_CASE("noiseless channel concentrates at the saturation cell") {
  const auto c = build_constellation(Modulation::Qpsk);
  const auto incoming = delta_density(kGrid, DeltaKind::Zero);
  Rng rng(6);
  const auto d = demapper_density(DemapperKind::MapOptimal, c, Fading::None, 1e-3, 0, incoming,
                                  20'000, rng);
  CHECK(d.weights().back() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("density bundle: averaging, symmetry, degradation") {
  const auto c = build_constellation(Modulation::Qam16);
  const auto incoming = delta_density(kGrid, DeltaKind::Zero);
  Rng rng(7);
  const auto b1 = demapper_density_bundle(DemapperKind::MapOptimal, c, Fading::None, 0.55,
                                          incoming, 400'000, rng);
  CHECK(b1.avg.total_mass() == doctest::Approx(1.0).epsilon(1e-9));

  // avg error prob sits strictly between the best and worst bit level.
  double errs[4];
  for (int m = 0; m < 4; ++m) errs[m] = error_prob(b1.per_bit[m]);
  const double avg_err = error_prob(b1.avg);
  CHECK(avg_err > *std::min_element(errs, errs + 4));
  CHECK(avg_err < *std::max_element(errs, errs + 4));

  // MAP output densities are symmetric up to MC noise (coarse binning).
  for (int m = 0; m < 4; ++m) {
    const auto& d = b1.per_bit[m];
    const int bin = 64;
    double resid = 0.0, mass = 0.0;
    for (int j0 = 0; j0 + bin <= kGrid.points(); j0 += bin) {
      double wp = 0.0, wn = 0.0;
      for (int j = j0; j < j0 + bin; ++j) {
        wp += d.weights()[j];
        const int mirror = 2 * kGrid.half_cells - j;
        wn += d.weights()[mirror] * fast_exp(kGrid.value_at(mirror));
      }
      (void)wn;
      mass += wp;
    }
    // Symmetry via the signed functional: E[f(-X) - f(X)e^-X] for f = 1{x<0}.
    double asym = 0.0;
    for (int j = 0; j < kGrid.half_cells; ++j) {
      const int mirror = 2 * kGrid.half_cells - j;
      asym += d.weights()[j] - d.weights()[mirror] * fast_exp(-kGrid.value_at(mirror));
    }
    CHECK(std::abs(asym) < 2e-3);
    CHECK(mass > 0.0);
  }

  // Degradation in sigma.
  Rng rng2(7);
  const auto b2 = demapper_density_bundle(DemapperKind::MapOptimal, c, Fading::None, 0.75,
                                          incoming, 400'000, rng2);
  CHECK(error_prob(b1.avg) < error_prob(b2.avg));

  CHECK_THROWS_AS(demapper_density_bundle(DemapperKind::MapOptimal, c, Fading::None, 0.55,
                                          incoming, 100, rng),
                  std::invalid_argument);
}

TEST_CASE("qpsk bundle: both bit levels agree and match the average") {
  const auto c = build_constellation(Modulation::Qpsk);
  const auto incoming = delta_density(kGrid, DeltaKind::Zero);
  Rng rng(8);
  const auto b = demapper_density_bundle(DemapperKind::MapOptimal, c, Fading::None, 0.8, incoming,
                                         400'000, rng);
  CHECK(l1_distance(b.per_bit[0], b.per_bit[1]) < 0.03);  // same law, independent noise
  LlrDensity avg(kGrid);
  avg.accumulate(b.per_bit[0], 0.5);
  avg.accumulate(b.per_bit[1], 0.5);
  CHECK(l1_distance(avg, b.avg) < 1e-12);
}

TEST_CASE("deterministic for a fixed seed") {
  const auto c = build_constellation(Modulation::Qam16);
  const auto incoming = delta_density(kGrid, DeltaKind::Zero);
  Rng r1(99), r2(99);
  const auto a = demapper_density_bundle(DemapperKind::MaxLogMap, c, Fading::RayleighPerfectCsi,
                                         0.6, incoming, 50'000, r1);
  const auto b = demapper_density_bundle(DemapperKind::MaxLogMap, c, Fading::RayleighPerfectCsi,
                                         0.6, incoming, 50'000, r2);
  CHECK(l1_distance(a.avg, b.avg) == 0.0);
}

}  // TEST_SUITE
