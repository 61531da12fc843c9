#include <doctest.h>

#include <cmath>

#include "bicm/gmi.hpp"
#include "oracle/scalar_bms.hpp"

using namespace bicm;

TEST_SUITE("gmi") {

TEST_CASE("i_curve at s = 0 is identically zero") {
  const ChannelSpec spec{build_constellation(Modulation::Qam16), Fading::None, 0.7};
  Rng rng(1);
  const auto pt = i_curve(spec, DemapperKind::MapOptimal, 0.0, 20'000, rng);
  for (double v : pt.per_bit) CHECK(std::abs(v) < 1e-12);
  CHECK(std::abs(pt.total) < 1e-11);
}

TEST_CASE("noiseless channel reaches M bits at s = 1") {
  const ChannelSpec spec{build_constellation(Modulation::Qam16), Fading::None, 0.01};
  Rng rng(2);
  const auto pt = i_curve(spec, DemapperKind::MapOptimal, 1.0, 20'000, rng);
  CHECK(pt.total == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("qpsk MAP i-curve at s=1 equals twice the BPSK capacity") {
  const double sigma = 0.95;
  const ChannelSpec spec{build_constellation(Modulation::Qpsk), Fading::None, sigma};
  Rng rng(3);
  const auto pt = i_curve(spec, DemapperKind::MapOptimal, 1.0, 400'000, rng);
  const double ref = 2.0 * oracle::bpsk_capacity(sigma);
  CHECK(std::abs(pt.total - ref) < 4.0 * pt.total_stderr + 1e-3);
}

TEST_CASE("gmi maximizer sits at s = 1 for the matched metric") {
  const ChannelSpec spec{build_constellation(Modulation::Qam16), Fading::None, 0.55};
  Rng rng(4);
  const auto res = gmi(spec, DemapperKind::MapOptimal, 400'000, rng);
  CHECK(std::abs(res.s_star - 1.0) < 0.03);
}

TEST_CASE("mismatched metric loses rate: GMI(mlm) <= GMI(map)") {
  const ChannelSpec spec{build_constellation(Modulation::Qam64), Fading::None, 0.45};
  Rng r1(5), r2(5);
  const auto map = gmi(spec, DemapperKind::MapOptimal, 300'000, r1);
  const auto mlm = gmi(spec, DemapperKind::MaxLogMap, 300'000, r2);
  CHECK(mlm.value <= map.value + 2.0 * (map.stderr_ + mlm.stderr_));
}

TEST_CASE("very noisy channel: GMI tends to zero") {
  const ChannelSpec spec{build_constellation(Modulation::Qpsk), Fading::None, 40.0};
  Rng rng(6);
  const auto res = gmi(spec, DemapperKind::MapOptimal, 100'000, rng);
  CHECK(res.value < 0.01);
}

TEST_CASE("cm >= gmi, equality for qpsk") {
  const double sigma = 0.9;
  const ChannelSpec spec{build_constellation(Modulation::Qam16), Fading::None, sigma * 0.6};
  Rng r1(7), r2(7);
  const auto g = gmi(spec, DemapperKind::MapOptimal, 400'000, r1);
  const auto cm = cm_mutual_info(spec, 400'000, r2);
  CHECK(cm.value >= g.value - 2.0 * (g.stderr_ + cm.stderr_));

  const ChannelSpec qpsk{build_constellation(Modulation::Qpsk), Fading::None, sigma};
  Rng r3(8), r4(8);
  const auto gq = gmi(qpsk, DemapperKind::MapOptimal, 400'000, r3);
  const auto cq = cm_mutual_info(qpsk, 400'000, r4);
  CHECK(std::abs(gq.value - cq.value) < 3.0 * (gq.stderr_ + cq.stderr_) + 2e-3);

  // sigma -> 0 saturates CM at M bits.
  ChannelSpec clean = qpsk;
  clean.sigma = 0.01;
  Rng r5(9);
  CHECK(cm_mutual_info(clean, 50'000, r5).value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("noise threshold smoke: qpsk rate 1/2 near the BPSK limit") {
  const ChannelSpec spec{build_constellation(Modulation::Qpsk), Fading::None, 1.0};
  const auto thr =
      noise_threshold(spec, DemapperKind::MapOptimal, 0.5, ThresholdMode::Gmi, 400'000, 42);
  // Quadrature reference: C_bpsk(sigma*) = 1/2.
  const double sigma_ref = oracle::bpsk_sigma_for_entropy(0.5);
  const double ref_db = sigma_to_ebn0(sigma_ref, 0.5, 2);
  CHECK(std::abs(thr.ebn0_db - ref_db) < 0.1);
  CHECK_THROWS_AS(noise_threshold(spec, DemapperKind::MapOptimal, 1.5, ThresholdMode::Gmi,
                                  400'000, 42),
                  std::invalid_argument);
}

TEST_CASE("i_curve total is concave in s over the bracket") {
  const ChannelSpec spec{build_constellation(Modulation::Qam16), Fading::None, 0.6};
  std::vector<double> totals;
  for (double s : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5}) {
    Rng rng(10);  // common random numbers across s
    totals.push_back(i_curve(spec, DemapperKind::MapOptimal, s, 200'000, rng).total);
  }
  for (std::size_t k = 1; k + 1 < totals.size(); ++k) {
    CHECK(totals[k] >= 0.5 * (totals[k - 1] + totals[k + 1]) - 1e-3);
  }
}

}  // TEST_SUITE
