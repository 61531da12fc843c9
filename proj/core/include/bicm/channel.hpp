#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bicm/constellation.hpp"
#include "bicm/rng.hpp"

namespace bicm {

enum class Fading { None, RayleighPerfectCsi };

Fading parse_fading(const std::string& name);  // "awgn" | "rayleigh"
const char* fading_name(Fading f);

/// Y = A X + Z with Z ~ CN(0, sigma^2); A = 1 or CN(0,1) with perfect CSI
/// at the receiver. Symbols have unit average energy, so sigma^2 alone
/// carries the SNR.
struct ChannelSpec {
  Constellation constellation;
  Fading fading = Fading::None;
  double sigma = 1.0;
};

struct ChannelObservation {
  std::complex<double> y;
  std::complex<double> a;  // 1 when fading is None
};

/// One channel use. Consumes a fixed number of rng words per call (two for
/// noise, plus two when fading), which keeps sample streams aligned when the
/// same seed is replayed at a different sigma.
ChannelObservation sample_output(const ChannelSpec& spec, int symbol_index, Rng& rng);

/// Es = 1, N0 = sigma^2, Eb = 1/(R*M): sigma^2 = 1 / (R*M*10^(dB/10)).
double ebn0_to_sigma(double ebn0_db, double code_rate, int bits_per_symbol);
double sigma_to_ebn0(double sigma, double code_rate, int bits_per_symbol);

struct AlphaEstimate {
  double alpha = 0;
  double stderr_ = 0;
};

/// Monte-Carlo estimate of the normalized channel entropy per bit,
/// alpha = H(X|Y,A)/M in [0,1], uniform input.
AlphaEstimate channel_entropy_alpha(const ChannelSpec& spec, std::int64_t n_samples, Rng& rng);

/// Fixed-sample-set evaluator for alpha(sigma). One draw of (X, A, Z0) is
/// shared by every sigma, so alpha(sigma) is a smooth deterministic function
/// of sigma and can be bisected or differenced reliably.
class AlphaModel {
 public:
  AlphaModel(Constellation c, Fading fading, std::int64_t n_samples, std::uint64_t seed);

  double alpha(double sigma) const;
  double dalpha_dsigma(double sigma) const;  // central difference, shared samples
  /// Inverse of the monotone map sigma -> alpha; relative tolerance 1e-4.
  /// Requires alpha in (0,1).
  double sigma_from_alpha(double alpha) const;

  const Constellation& constellation() const { return constellation_; }
  Fading fading() const { return fading_; }
  std::int64_t samples() const { return static_cast<std::int64_t>(symbol_.size()); }

 private:
  Constellation constellation_;
  Fading fading_;
  std::vector<std::uint8_t> symbol_;
  std::vector<std::complex<double>> gain_;
  std::vector<std::complex<double>> noise_;  // unit-variance draws, scaled by sigma
};

/// Convenience wrapper: builds a fresh AlphaModel and inverts it.
double alpha_to_sigma(const ChannelSpec& spec_template, double alpha,
                      std::int64_t n_samples, std::uint64_t seed);

}  // namespace bicm
