#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace bicm {

inline constexpr double kLn2 = 0.69314718055994530941723212145818;
inline constexpr double kLog2E = 1.4426950408889634073599246810019;

/// exp(x) via argument reduction + degree-10 Taylor, relative error < 1e-12.
/// Monte-Carlo inner loops spend most of their time here; the branch-free
/// core lets the compiler vectorize where libm's exp cannot.
inline double fast_exp(double x) {
  if (x < -700.0) return 0.0;
  if (x > 700.0) return std::exp(x);
  const double magic = 6755399441055744.0;  // 2^52 + 2^51
  const double nd = (x * kLog2E + magic) - magic;
  // Cody-Waite split of ln2.
  double r = x - nd * 0.693147180369123816490e0;
  r -= nd * 1.90821492927058770002e-10;
  double p = 1.0 / 3628800.0;
  p = p * r + 1.0 / 362880.0;
  p = p * r + 1.0 / 40320.0;
  p = p * r + 1.0 / 5040.0;
  p = p * r + 1.0 / 720.0;
  p = p * r + 1.0 / 120.0;
  p = p * r + 1.0 / 24.0;
  p = p * r + 1.0 / 6.0;
  p = p * r + 0.5;
  p = p * r + 1.0;
  p = p * r + 1.0;
  const auto n = static_cast<std::int64_t>(nd);
  const double scale = std::bit_cast<double>((n + 1023) << 52);
  return p * scale;
}

/// ln(x) for normal positive x, relative error < 1e-12.
inline double fast_log(double x) {
  if (!(x > 0.0)) return x == 0.0 ? -HUGE_VAL : std::log(x);
  const auto bits = std::bit_cast<std::int64_t>(x);
  std::int64_t e = ((bits >> 52) & 0x7ff) - 1023;
  double m = std::bit_cast<double>((bits & 0xFFFFFFFFFFFFFLL) | 0x3FF0000000000000LL);
  if (m > 1.4142135623730951) {
    m *= 0.5;
    e += 1;
  }
  const double u = (m - 1.0) / (m + 1.0);
  const double u2 = u * u;
  double p = 1.0 / 13.0;
  p = p * u2 + 1.0 / 11.0;
  p = p * u2 + 1.0 / 9.0;
  p = p * u2 + 1.0 / 7.0;
  p = p * u2 + 1.0 / 5.0;
  p = p * u2 + 1.0 / 3.0;
  p = p * u2 + 1.0;
  return 2.0 * u * p + static_cast<double>(e) * kLn2;
}

/// ln(1 + e^z), stable across the whole real line.
inline double log1p_exp(double z) {
  if (z > 33.0) return z;
  if (z < -33.0) return fast_exp(z);
  return fast_log(1.0 + fast_exp(z));
}

/// log2(1 + e^z).
inline double log2_1p_exp(double z) { return log1p_exp(z) * kLog2E; }

/// ln Pr(bit = 0) given the LLR ln(P0/P1). Accepts +/-inf.
inline double log_prob0_from_llr(double llr) {
  if (std::isinf(llr)) return llr > 0 ? 0.0 : -HUGE_VAL;
  return -log1p_exp(-llr);
}

/// ln Pr(bit = 1) given the LLR ln(P0/P1).
inline double log_prob1_from_llr(double llr) {
  if (std::isinf(llr)) return llr > 0 ? -HUGE_VAL : 0.0;
  return -log1p_exp(llr);
}

/// Gaussian tail Q(x).
inline double q_func(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

}  // namespace bicm
