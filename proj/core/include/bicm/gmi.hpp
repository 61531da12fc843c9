#pragma once

#include <cstdint>
#include <vector>

#include "bicm/channel.hpp"
#include "bicm/demapper.hpp"

namespace bicm {

/// One point of the I-curve: per-bit achievable rates at decoder metric
/// scaling s, in bits per channel bit.
struct ICurvePoint {
  double s = 0;
  std::vector<double> per_bit;
  std::vector<double> per_bit_stderr;
  double total = 0;
  double total_stderr = 0;
};

/// Monte-Carlo I-curve evaluation: I_m(s) = 1 - E log2(1 + exp((2 b_m(X)-1)
/// Lambda_m(Y) s)) with the demapper run open-loop (no priors).
ICurvePoint i_curve(const ChannelSpec& spec, DemapperKind kind, double s,
                    std::int64_t n_samples, Rng& rng);

struct GmiResult {
  double value = 0;   // bits per symbol
  double s_star = 0;  // maximizing metric scale
  double stderr_ = 0;
};

/// GMI = max_s I(s); golden-section search on s in [0,4] to 1e-4.
GmiResult gmi(const ChannelSpec& spec, DemapperKind kind, std::int64_t n_samples, Rng& rng);

struct MiResult {
  double value = 0;  // bits per symbol
  double stderr_ = 0;
};

/// Coded-modulation mutual information I(X;Y) (conditioned on the fading
/// draw), uniform input: the BICM-ID limit.
MiResult cm_mutual_info(const ChannelSpec& spec, std::int64_t n_samples, Rng& rng);

enum class ThresholdMode { Gmi, Cm };

struct NoiseThreshold {
  double sigma_star = 0;
  double ebn0_db = 0;
  std::int64_t samples = 0;
  double stderr_ = 0;  // MC standard error of I(sigma*)/M
};

/// Noise threshold sigma* = I^{-1}(R), R in bits per channel bit; bisection
/// in Eb/N0 to 0.01 dB with common random numbers across sigma.
NoiseThreshold noise_threshold(const ChannelSpec& spec_template, DemapperKind kind,
                               double rate, ThresholdMode mode, std::int64_t n_samples,
                               std::uint64_t seed);

}  // namespace bicm
