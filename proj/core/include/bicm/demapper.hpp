#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bicm/channel.hpp"
#include "bicm/constellation.hpp"
#include "bicm/density.hpp"

namespace bicm {

enum class DemapperKind { MapOptimal, MaxLogMap };

DemapperKind parse_demapper(const std::string& name);  // "map" | "mlm"
const char* demapper_name(DemapperKind kind);

/// A-priori LLRs ln(P0/P1), one per bit of a symbol; the all-zero marker is
/// the no-feedback case. Entries may be +-inf.
class PriorVector {
 public:
  static PriorVector all_zero(int m_bits) { return PriorVector(m_bits); }
  explicit PriorVector(std::vector<double> llrs) : llrs_(std::move(llrs)), all_zero_(false) {}

  bool is_all_zero() const { return all_zero_; }
  int size() const { return static_cast<int>(llrs_.size()); }
  double operator[](int l) const { return all_zero_ ? 0.0 : llrs_[l]; }

 private:
  explicit PriorVector(int m_bits) : llrs_(m_bits, 0.0), all_zero_(true) {}
  std::vector<double> llrs_;
  bool all_zero_;
};

/// Demapper output LLR for bit m of one observation (extrinsic rule: the
/// prior of bit m itself does not enter). MAP sums prior-weighted symbol
/// likelihoods over each half of the bit partition; max-log-MAP keeps only
/// the largest term of each sum.
double bit_llr(DemapperKind kind, const Constellation& c, const ChannelObservation& obs,
               double sigma, int m, const PriorVector& prior);

struct DemapperDensities {
  std::vector<LlrDensity> per_bit;  // phi_m, all-zero-conditioned
  LlrDensity avg;                   // phi = mean over m
};

/// Monte-Carlo extraction of the demapper density operators: uniform random
/// symbols, channel draws, and per-bit priors drawn independently from
/// `incoming` with signs set by the true bits; outputs are sign-flipped back
/// onto the all-zero convention and histogrammed on incoming's grid.
/// One pass serves every bit level. Requires n_samples >= 1e4.
DemapperDensities demapper_density_bundle(DemapperKind kind, const Constellation& c,
                                          Fading fading, double sigma,
                                          const LlrDensity& incoming,
                                          std::int64_t n_samples, Rng& rng);

/// phi_m for a single bit level.
LlrDensity demapper_density(DemapperKind kind, const Constellation& c, Fading fading,
                            double sigma, int m, const LlrDensity& incoming,
                            std::int64_t n_samples, Rng& rng);

/// phi: average output density over bit levels.
LlrDensity demapper_density_avg(DemapperKind kind, const Constellation& c, Fading fading,
                                double sigma, const LlrDensity& incoming,
                                std::int64_t n_samples, Rng& rng);

}  // namespace bicm
