#pragma once

#include <cstdint>
#include <vector>

#include "bicm/de_flat.hpp"

namespace bicm {

/// Spatially-coupled (dl, dr, L, w) ensemble: variable positions -L..L, each
/// edge smoothed over a window of w positions, perfect-knowledge boundary.
struct ScEnsemble {
  int dl = 3;
  int dr = 6;
  int half_width = 64;  // L
  int w = 4;

  void validate() const;
  double nominal_rate() const { return 1.0 - static_cast<double>(dl) / dr; }
};

/// Closed-form design rate including the finite-L rate loss.
double sc_design_rate(const ScEnsemble& ens);

/// Eb/N0 shift caused by the rate loss: 10 log10(nominal/sc) >= 0 dB.
double sc_rate_loss_db(const ScEnsemble& ens);

/// Chain of 2L+1 position-average densities; positions outside [-L, L] are
/// pinned to Delta_{+inf} and never mutated.
struct ScState {
  ScEnsemble ens;
  std::vector<LlrDensity> chain;  // index i + L
  int iteration = 0;
  LlrDensity channel_avg;              // phi(Delta_0) for the open-loop schedule
  LlrDensity boundary;                 // Delta_{+inf}, shared by all out-of-range reads
  std::vector<LlrDensity> id_cache;    // per-position phi when iterating detection
  int refresh_count = 0;

  const LlrDensity& at(int i) const {
    return (i < -ens.half_width || i > ens.half_width)
               ? boundary
               : chain[static_cast<std::size_t>(i + ens.half_width)];
  }
};

ScState sc_init(const ScEnsemble& ens, const ChannelSpec& channel, DemapperKind kind,
                const DeSchedule& schedule, const DeOptions& opts);

/// One full-chain iteration of the coupled recursion
///   x_i = (1/w) sum_j rho((1/w) sum_k a_{i+j-k}),  a_i <- phi(L(x_i)) (*) lambda(x_i).
/// Reference implementation: no symmetry or freezing shortcuts.
ScState sc_de_step(const ScState& state, const ChannelSpec& channel, DemapperKind kind,
                   const DeSchedule& schedule, const DeOptions& opts);

struct ScRunResult {
  bool success = false;
  double max_error_prob = 1.0;
  int iterations = 0;
};

/// Runs the recursion to the chain-wide criterion max_i error_prob < epsilon.
/// Exploits the exact spatial symmetry a_i = a_{-i} and freezes positions
/// whose error probability has fallen below 1e-12, which confines work to
/// the active decoding wave.
ScRunResult sc_converges(const ScEnsemble& ens, const ChannelSpec& channel, DemapperKind kind,
                         const DeSchedule& schedule, const DeOptions& opts);

struct ScThreshold {
  double ebn0_db = 0;
  double sigma = 0;
  double design_rate = 0;  // with rate loss; used for the Eb/N0 conversion
  int iters_at_threshold = 0;
};

ScThreshold sc_bp_threshold(const ScEnsemble& ens, const ChannelSpec& spec_template,
                            DemapperKind kind, const DeSchedule& schedule,
                            const DeOptions& opts, double granularity_db = 0.01);

}  // namespace bicm
