#pragma once

#include <cstdint>
#include <vector>

#include "bicm/rng.hpp"

namespace bicm {

/// Uniform LLR lattice: points k*delta for k in [-half_cells, half_cells]
/// (delta = max_llr/half_cells), plus explicit mass cells at -inf and +inf.
/// Every density combined in one computation must share one GridSpec.
struct GridSpec {
  double max_llr = 30.0;
  int half_cells = 2048;

  double delta() const { return max_llr / half_cells; }
  int points() const { return 2 * half_cells + 1; }
  double value_at(int index) const { return (index - half_cells) * delta(); }
  bool operator==(const GridSpec&) const = default;
};

enum class DeltaKind { PlusInfinity, Zero };

/// Quantized LLR distribution: the unit of all density-evolution work.
/// Immutable by convention; operations return fresh values.
class LlrDensity {
 public:
  LlrDensity() : weights_(grid_.points(), 0.0) {}
  explicit LlrDensity(const GridSpec& grid) : grid_(grid), weights_(grid.points(), 0.0) {}

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& weights() { return weights_; }
  double mass_minus_inf() const { return minf_; }
  double mass_plus_inf() const { return pinf_; }
  double& mass_minus_inf() { return minf_; }
  double& mass_plus_inf() { return pinf_; }

  double total_mass() const;
  /// Mean of the finite part (saturation cells included at +-max_llr).
  double finite_mean() const;

  /// Adds weight*other into this (mixture building block).
  void accumulate(const LlrDensity& other, double weight);
  void scale(double factor);

  /// Deposits probability mass at LLR value v: linear split between the two
  /// neighboring lattice points; |v| >= max_llr saturates into the boundary
  /// finite cell, +-inf goes to the infinity cells.
  void deposit(double v, double mass);

 private:
  GridSpec grid_;
  std::vector<double> weights_;
  double minf_ = 0.0;
  double pinf_ = 0.0;
};

LlrDensity delta_density(const GridSpec& grid, DeltaKind kind);

/// Variable-node combination (density of the sum of independent LLRs).
/// Saturates at +-max_llr; infinity cells absorb finite mass.
LlrDensity var_conv(const LlrDensity& a, const LlrDensity& b);

/// Check-node combination 2 atanh(tanh(x/2) tanh(y/2)), computed in the
/// (sign, -ln tanh(|x|/2)) decomposition: signs multiply, magnitudes combine
/// additively in the transform domain; results are requantized onto the
/// lattice with a fixed linear mass split (precomputed per grid).
LlrDensity chk_conv(const LlrDensity& a, const LlrDensity& b);

/// Mass below zero plus half the mass at exactly zero.
double error_prob(const LlrDensity& a);

/// L1 distance including the infinity cells.
double l1_distance(const LlrDensity& a, const LlrDensity& b);

/// Residual of the channel-symmetry condition a(-x) = a(x) e^{-x}; zero for
/// exactly symmetric densities.
double symmetry_residual(const LlrDensity& a);

/// Inverse-CDF sampler; one rng word per draw. May return +-inf.
class DensitySampler {
 public:
  explicit DensitySampler(const LlrDensity& d);
  double draw(Rng& rng) const;

 private:
  std::vector<double> cdf_;     // over finite cells, then -inf, then +inf
  std::vector<double> values_;
};

}  // namespace bicm
