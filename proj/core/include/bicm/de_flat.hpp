#pragma once

#include <cstdint>
#include <vector>

#include "bicm/channel.hpp"
#include "bicm/demapper.hpp"
#include "bicm/density.hpp"
#include "bicm/profile.hpp"

namespace bicm {

/// Demapper update schedule. NonIterative computes the demapper density once
/// with a zero-LLR prior and never refreshes; Id(period) recomputes it from
/// the current variable-to-demapper density every `id_period` iterations.
struct DeSchedule {
  enum class Mode { NonIterative, Id };
  Mode mode = Mode::NonIterative;
  int id_period = 100;
  int max_iters = 2000;
  double epsilon = 1e-7;
};

struct DeOptions {
  GridSpec grid;
  std::int64_t phi_samples = 2'000'000;
  std::uint64_t seed = 1;
  // Declare failure when the error probability improves by less than
  // stall_rel (relative) over stall_window iterations while still far from
  // epsilon. Zero window disables the cut.
  int stall_window = 200;
  double stall_rel = 1e-4;
};

/// Per-bit density-evolution state: a_m, their average, and the cached
/// demapper output densities for the current schedule phase.
struct DeState {
  std::vector<LlrDensity> per_bit;
  LlrDensity avg;
  int iteration = 0;
  std::vector<LlrDensity> demapper_cache;  // phi_m at the last refresh
  int refresh_count = 0;
};

DeState de_init(const DegreeProfile& profile, const ChannelSpec& channel, DemapperKind kind,
                const DeSchedule& schedule, const DeOptions& opts);

/// One iteration: a_m <- phi_m(L(rho(a))) (*) lambda(rho(a)), refreshing the
/// demapper cache when the schedule says so.
DeState de_step(const DeState& state, const DegreeProfile& profile, const ChannelSpec& channel,
                DemapperKind kind, const DeSchedule& schedule, const DeOptions& opts);

struct DeResult {
  bool success = false;
  double final_error_prob = 1.0;
  int iterations = 0;
};

DeResult de_converges(const DegreeProfile& profile, const ChannelSpec& channel,
                      DemapperKind kind, const DeSchedule& schedule, const DeOptions& opts);

struct BpThreshold {
  double ebn0_db = 0;
  double sigma = 0;
  int iters_at_threshold = 0;  // iterations used at the last converging point
};

/// BP threshold by bisection in Eb/N0 (0.01 dB, or opts-independent
/// `granularity_db` when positive). Eb/N0 conversion uses the profile's
/// design rate. The same seed is reused at every sigma so the demapper
/// densities vary smoothly and the success decision stays monotone.
BpThreshold bp_threshold(const DegreeProfile& profile, const ChannelSpec& spec_template,
                         DemapperKind kind, const DeSchedule& schedule, const DeOptions& opts,
                         double granularity_db = 0.01);

}  // namespace bicm
