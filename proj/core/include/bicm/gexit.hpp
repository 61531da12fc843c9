#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bicm/de_coupled.hpp"
#include "bicm/de_flat.hpp"

namespace bicm {

/// Symbol-extrinsic distribution in per-bit LLR coordinates: M independent
/// per-bit extrinsic densities whose product defines the extrinsic symbol
/// posterior u. Built from symmetric all-zero-conditioned densities.
struct ExtrinsicProductDensity {
  std::vector<LlrDensity> per_bit;

  /// All M bits share one density (the BP case: F[L(rho(a))] for every bit).
  static ExtrinsicProductDensity shared(const LlrDensity& d, int m_bits) {
    ExtrinsicProductDensity e;
    e.per_bit.assign(m_bits, d);
    return e;
  }
};

struct GexitOptions {
  std::int64_t kernel_samples = 1'000'000;
  std::int64_t alpha_samples = 400'000;  // AlphaModel sample set
  double target_dalpha = 1e-3;           // finite-difference step, in alpha
  std::uint64_t seed = 1;
};

struct GexitValue {
  double g = 0;
  double stderr_ = 0;
};

/// GEXIT functional: MC estimate of sum_x p(x) int x_x(u) kappa_x(u) du,
/// normalized per bit so g is in [0,1]. The kernel's alpha-derivative is a
/// symmetric finite difference in sigma (common random numbers, the
/// log-ratio held at the base sigma) divided by dalpha/dsigma.
GexitValue gexit_functional(const ExtrinsicProductDensity& ext, const ChannelSpec& spec,
                            const AlphaModel& alpha_model, std::int64_t n_samples,
                            double target_dalpha, Rng& rng);

struct GexitPoint {
  double alpha = 0;
  double g = 0;
  double stderr_ = 0;
  double sigma = 0;
  bool de_converged = true;  // fixed point reached within the iteration cap
  int de_iterations = 0;
};

struct GexitCurve {
  std::vector<GexitPoint> points;  // strictly increasing alpha
  std::string ensemble;
  std::string channel;
  std::string demapper;
  double design_rate = 0;
  int bits_per_symbol = 0;
  std::uint64_t seed = 0;
};

struct GexitGridOptions {
  int n_points = 44;              // initial descending alpha sweep
  double alpha_max = 0.99;
  double alpha_min = 0.30;        // sweep floor if no decoding jump is found
  double refine_dg = 0.05;        // insert midpoints while |dg| exceeds this
  int max_refine_points = 48;
  double jump_width = 1e-3;       // resolve the BP jump to this alpha width
};

/// Traces the BP-GEXIT curve by sweeping alpha downward with warm-started
/// density evolution (stable upper branch), resolving the decoding jump and
/// refining where the curve moves fast. Points whose fixed-point iteration
/// hit the cap are flagged, not dropped.
GexitCurve bp_gexit_curve(const DegreeProfile& profile, const ChannelSpec& spec_template,
                          DemapperKind kind, const GexitGridOptions& gopts,
                          const DeSchedule& schedule, const DeOptions& dopts,
                          const GexitOptions& kopts);

/// Spatially-coupled variant: g(alpha) is the position average of the
/// functional at the chain fixed point, extrinsic density L(x_i) per
/// position.
GexitCurve bp_gexit_curve(const ScEnsemble& ens, const ChannelSpec& spec_template,
                          DemapperKind kind, const GexitGridOptions& gopts,
                          const DeSchedule& schedule, const DeOptions& dopts,
                          const GexitOptions& kopts);

struct AreaThreshold {
  double alpha_bar = 0;
  double sigma = 0;    // interpolated from the curve
  double ebn0_db = 0;  // at the rate used for the integral, curve's M
};

/// Largest alpha with int_alpha^1 g = rate (trapezoid, analytic (1,1)
/// endpoint). Throws if the curve's total area cannot reach the rate.
AreaThreshold area_threshold(const GexitCurve& curve, double rate);

}  // namespace bicm
