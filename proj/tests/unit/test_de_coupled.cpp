#include <doctest.h>

#include <cmath>

#include "bicm/de_coupled.hpp"

using namespace bicm;

namespace {

DeOptions fast_opts(std::uint64_t seed = 1) {
  DeOptions opts;
  opts.grid = GridSpec{25.0, 1024};
  opts.phi_samples = 200'000;
  opts.seed = seed;
  return opts;
}

ChannelSpec qpsk_at(double ebn0_db, double rate) {
  return ChannelSpec{build_constellation(Modulation::Qpsk), Fading::None,
                     ebn0_to_sigma(ebn0_db, rate, 2)};
}

// Closed-form check by explicit position-by-position counting: a check at
// position p with k of its w source positions present keeps the fraction
// 1 - ((w-k)/w)^dr of its nodes nontrivial.
double edge_count_rate(const ScEnsemble& e) {
  const int big_l = e.half_width;
  double effective_checks = 0.0;
  for (int p = -big_l; p <= big_l + e.w - 1; ++p) {
    int present = 0;
    for (int src = p - e.w + 1; src <= p; ++src)
      if (src >= -big_l && src <= big_l) ++present;
    const double dead = static_cast<double>(e.w - present) / e.w;
    effective_checks += 1.0 - std::pow(dead, e.dr);
  }
  const double vars = 2.0 * big_l + 1.0;
  return 1.0 - (static_cast<double>(e.dl) / e.dr) * effective_checks / vars;
}

}  // namespace

TEST_SUITE("de_coupled") {

TEST_CASE("design rate: closed form and special cases") {
  CHECK(sc_design_rate({3, 6, 64, 1}) == doctest::Approx(0.5).epsilon(1e-14));  // w=1: no loss
  CHECK(sc_design_rate({3, 6, 64, 4}) == doctest::Approx(0.489875).epsilon(1e-6));
  CHECK(sc_design_rate({3, 6, 100000, 4}) == doctest::Approx(0.5).epsilon(1e-4));  // L -> inf
  CHECK_THROWS_AS(sc_design_rate({3, 3, 64, 4}), std::invalid_argument);
  CHECK_THROWS_AS(sc_design_rate({1, 6, 64, 4}), std::invalid_argument);
}

TEST_CASE("design rate agrees with explicit edge counting") {
  for (const auto& e : {ScEnsemble{3, 6, 8, 2}, ScEnsemble{3, 6, 64, 4}, ScEnsemble{4, 8, 16, 3},
                        ScEnsemble{6, 12, 32, 4}}) {
    CHECK(sc_design_rate(e) == doctest::Approx(edge_count_rate(e)).epsilon(1e-12));
  }
}

TEST_CASE("rate loss in dB matches the two conversions") {
  const ScEnsemble e{3, 6, 64, 4};
  const double shift = sc_rate_loss_db(e);
  CHECK(shift == doctest::Approx(10.0 * std::log10(0.5 / sc_design_rate(e))).epsilon(1e-12));
  CHECK(shift > 0.08);
  CHECK(shift < 0.10);
}

TEST_CASE("all-boundary chain is a fixed point") {
  const ScEnsemble e{3, 6, 4, 2};
  const auto opts = fast_opts();
  const DeSchedule schedule;
  const auto spec = qpsk_at(1.5, sc_design_rate(e));
  auto state = sc_init(e, spec, DemapperKind::MapOptimal, schedule, opts);
  for (auto& d : state.chain) d = state.boundary;
  const auto next = sc_de_step(state, spec, DemapperKind::MapOptimal, schedule, opts);
  for (const auto& d : next.chain) {
    CHECK(d.mass_plus_inf() == 1.0);
  }
}

TEST_CASE("spatial symmetry holds exactly along the iteration") {
  const ScEnsemble e{3, 6, 6, 3};
  const auto opts = fast_opts(3);
  const DeSchedule schedule;
  const auto spec = qpsk_at(1.2, sc_design_rate(e));
  auto state = sc_init(e, spec, DemapperKind::MapOptimal, schedule, opts);
  for (int it = 0; it < 5; ++it) {
    state = sc_de_step(state, spec, DemapperKind::MapOptimal, schedule, opts);
    for (int i = 1; i <= e.half_width; ++i) {
      CHECK(l1_distance(state.at(i), state.at(-i)) < 1e-12);
    }
  }
}

TEST_CASE("w = 1 decouples into the flat recursion") {
  const ScEnsemble e{3, 6, 2, 1};
  const auto opts = fast_opts(4);
  const DeSchedule schedule;
  const auto spec = qpsk_at(2.0, 0.5);
  auto state = sc_init(e, spec, DemapperKind::MapOptimal, schedule, opts);
  LlrDensity flat = state.channel_avg;  // same phi draw as the chain init
  const auto profile = DegreeProfile::regular(3, 6);
  for (int it = 0; it < 3; ++it) {
    state = sc_de_step(state, spec, DemapperKind::MapOptimal, schedule, opts);
    const auto rho = apply_profile(profile, ProfileSide::ChkEdge, flat);
    flat = var_conv(state.channel_avg, apply_profile(profile, ProfileSide::VarEdge, rho));
    for (int i = -e.half_width; i <= e.half_width; ++i) {
      CHECK(l1_distance(state.at(i), flat) < 1e-9);
    }
  }
}

TEST_CASE("optimized runner agrees with the reference step on success calls") {
  const ScEnsemble e{3, 6, 4, 2};
  const auto opts = fast_opts(5);
  DeSchedule schedule;
  schedule.max_iters = 400;
  const auto spec = qpsk_at(1.6, sc_design_rate(e));
  const auto run = sc_converges(e, spec, DemapperKind::MapOptimal, schedule, opts);
  CHECK(run.success);

  auto state = sc_init(e, spec, DemapperKind::MapOptimal, schedule, opts);
  bool ref_success = false;
  int ref_iters = 0;
  for (int it = 0; it < schedule.max_iters; ++it) {
    state = sc_de_step(state, spec, DemapperKind::MapOptimal, schedule, opts);
    double max_err = 0.0;
    for (const auto& d : state.chain) max_err = std::max(max_err, error_prob(d));
    if (max_err < schedule.epsilon) {
      ref_success = true;
      ref_iters = it + 1;
      break;
    }
  }
  CHECK(ref_success);
  CHECK(run.iterations == ref_iters);
}

TEST_CASE("decoding wave: boundaries lead the center above the flat threshold") {
  const ScEnsemble e{3, 6, 16, 3};
  const auto opts = fast_opts(6);
  DeSchedule schedule;
  const auto spec = qpsk_at(1.35, 0.5);  // above the flat (3,6) BP threshold
  auto state = sc_init(e, spec, DemapperKind::MapOptimal, schedule, opts);
  for (int it = 0; it < 60; ++it)
    state = sc_de_step(state, spec, DemapperKind::MapOptimal, schedule, opts);
  const double edge = error_prob(state.at(e.half_width - 1));
  const double center = error_prob(state.at(0));
  CHECK(edge < 0.5 * center);
}

TEST_CASE("sc converges wherever the flat ensemble converges") {
  const ScEnsemble e{3, 6, 8, 4};
  const auto opts = fast_opts(7);
  DeSchedule schedule;
  schedule.max_iters = 600;
  // 1.6 dB at rate 1/2 is comfortably above the flat (3,6) threshold; the
  // coupled chain must decode there too (same sigma).
  ChannelSpec spec = qpsk_at(1.6, 0.5);
  const auto run = sc_converges(e, spec, DemapperKind::MapOptimal, schedule, opts);
  CHECK(run.success);
}

}  // TEST_SUITE
