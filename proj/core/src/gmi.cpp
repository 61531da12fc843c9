#include "bicm/gmi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bicm/mathutil.hpp"
#include "bicm/parallel.hpp"

namespace bicm {

namespace {

// Per-bit LLRs of one open-loop observation, shared by the estimators here.
void open_loop_llrs(DemapperKind kind, const Constellation& c, std::complex<double> y,
                    std::complex<double> a, double inv_sigma_sq, double* llr) {
  const int n = c.size();
  const int m_bits = c.bits_per_symbol;
  double e[64];
  double emax = -HUGE_VAL;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> d = y - a * c.symbols[i];
    e[i] = -(d.real() * d.real() + d.imag() * d.imag()) * inv_sigma_sq;
    emax = std::max(emax, e[i]);
  }
  double s0[6], s1[6];
  if (kind == DemapperKind::MapOptimal) {
    for (int m = 0; m < m_bits; ++m) s0[m] = s1[m] = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = fast_exp(e[i] - emax);
      const std::uint32_t label = c.labels[i];
      for (int m = 0; m < m_bits; ++m) (((label >> m) & 1u) ? s1[m] : s0[m]) += p;
    }
    for (int m = 0; m < m_bits; ++m) llr[m] = fast_log(s0[m]) - fast_log(s1[m]);
  } else {
    for (int m = 0; m < m_bits; ++m) {
      s0[m] = -HUGE_VAL;
      s1[m] = -HUGE_VAL;
    }
    for (int i = 0; i < n; ++i) {
      const std::uint32_t label = c.labels[i];
      for (int m = 0; m < m_bits; ++m) {
        double& best = ((label >> m) & 1u) ? s1[m] : s0[m];
        best = std::max(best, e[i]);
      }
    }
    for (int m = 0; m < m_bits; ++m) llr[m] = s0[m] - s1[m];
  }
}

// Signed demapper outputs zeta = (2 b_m(X) - 1) Lambda_m(Y), sample-major.
// The expensive channel pass runs once; I(s) evaluations are then cheap
// passes over this buffer.
void fill_signed_llrs(const ChannelSpec& spec, DemapperKind kind, std::int64_t n_samples,
                      const Rng& base, std::vector<float>& zeta) {
  const int m_bits = spec.constellation.bits_per_symbol;
  const double inv_ss = 1.0 / (spec.sigma * spec.sigma);
  zeta.resize(static_cast<std::size_t>(n_samples) * m_bits);
  const std::int64_t block = 1 << 15;
  const std::int64_t n_blocks = (n_samples + block - 1) / block;
  parallel_blocks(n_blocks, [&](std::int64_t blk) {
    Rng r = base.child(static_cast<std::uint64_t>(blk));
    const std::int64_t lo = blk * block;
    const std::int64_t hi = std::min(n_samples, lo + block);
    double llr[6];
    for (std::int64_t i = lo; i < hi; ++i) {
      const int sym = static_cast<int>(r.uniform_int(spec.constellation.size()));
      const ChannelObservation obs = sample_output(spec, sym, r);
      open_loop_llrs(kind, spec.constellation, obs.y, obs.a, inv_ss, llr);
      const std::uint32_t label = spec.constellation.labels[sym];
      for (int m = 0; m < m_bits; ++m) {
        const double sign = ((label >> m) & 1u) ? 1.0 : -1.0;
        zeta[static_cast<std::size_t>(i) * m_bits + m] = static_cast<float>(sign * llr[m]);
      }
    }
  });
}

// Branchless log2(1 + e^t): vectorizable, absolute error < 1e-9. Uses
// ln(1+e^t) = max(t,0) + ln(1+e^-|t|) and ln(1+u) = 2 atanh(u/(2+u)).
inline double f_log2_1p_exp(double t) {
  const double at = std::min(std::abs(t), 45.0);
  const double magic = 6755399441055744.0;  // 2^52 + 2^51
  const double nd = (-at * kLog2E + magic) - magic;
  double r = -at - nd * 0.693147180369123816490e0;
  r -= nd * 1.90821492927058770002e-10;
  double p = 1.0 / 362880.0;
  p = p * r + 1.0 / 40320.0;
  p = p * r + 1.0 / 5040.0;
  p = p * r + 1.0 / 720.0;
  p = p * r + 1.0 / 120.0;
  p = p * r + 1.0 / 24.0;
  p = p * r + 1.0 / 6.0;
  p = p * r + 0.5;
  p = p * r + 1.0;
  p = p * r + 1.0;
  const double u = p * std::bit_cast<double>((static_cast<std::int64_t>(nd) + 1023) << 52);
  const double w = u / (2.0 + u);
  const double w2 = w * w;
  double q = 1.0 / 15.0;
  q = q * w2 + 1.0 / 13.0;
  q = q * w2 + 1.0 / 11.0;
  q = q * w2 + 1.0 / 9.0;
  q = q * w2 + 1.0 / 7.0;
  q = q * w2 + 1.0 / 5.0;
  q = q * w2 + 1.0 / 3.0;
  q = q * w2 + 1.0;
  return (std::max(t, 0.0) + 2.0 * w * q) * kLog2E;
}

// I(s) total over a signed-LLR buffer, with the per-sample variance.
void i_total_from_buffer(const std::vector<float>& zeta, int m_bits, double s,
                         double& total, double& stderr_out) {
  const std::int64_t n = static_cast<std::int64_t>(zeta.size()) / m_bits;
  const std::int64_t block = 1 << 16;
  const std::int64_t n_blocks = (n + block - 1) / block;
  std::vector<double> sum(n_blocks, 0.0), sum2(n_blocks, 0.0);
  parallel_blocks(n_blocks, [&](std::int64_t blk) {
    const std::int64_t lo = blk * block;
    const std::int64_t hi = std::min(n, lo + block);
    double bs = 0.0, bs2 = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      double t = 0.0;
      for (int m = 0; m < m_bits; ++m)
        t += f_log2_1p_exp(static_cast<double>(zeta[static_cast<std::size_t>(i) * m_bits + m]) * s);
      bs += t;
      bs2 += t * t;
    }
    sum[blk] = bs;
    sum2[blk] = bs2;
  });
  double a = 0.0, a2 = 0.0;
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    a += sum[b];
    a2 += sum2[b];
  }
  const double nd = static_cast<double>(n);
  const double mean = a / nd;
  const double var = std::max(0.0, a2 / nd - mean * mean);
  total = m_bits - mean;
  stderr_out = std::sqrt(var / nd);
}

GmiResult gmi_from_buffer(const std::vector<float>& zeta, int m_bits) {
  // Golden-section maximization of I(s) on [0,4] to 1e-4 in s.
  constexpr double kInvPhi = 0.6180339887498948482;
  double lo = 0.0, hi = 4.0;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1, f2, se;
  i_total_from_buffer(zeta, m_bits, x1, f1, se);
  i_total_from_buffer(zeta, m_bits, x2, f2, se);
  while (hi - lo > 1e-4) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      i_total_from_buffer(zeta, m_bits, x2, f2, se);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      i_total_from_buffer(zeta, m_bits, x1, f1, se);
    }
  }
  GmiResult res;
  res.s_star = 0.5 * (lo + hi);
  i_total_from_buffer(zeta, m_bits, res.s_star, res.value, res.stderr_);
  return res;
}

}  // namespace

ICurvePoint i_curve(const ChannelSpec& spec, DemapperKind kind, double s,
                    std::int64_t n_samples, Rng& rng) {
  if (s < 0.0) throw std::invalid_argument("i_curve: s must be nonnegative");
  const int m_bits = spec.constellation.bits_per_symbol;
  const double inv_ss = 1.0 / (spec.sigma * spec.sigma);
  const std::int64_t block = 1 << 15;
  const std::int64_t n_blocks = (n_samples + block - 1) / block;
  std::vector<std::vector<double>> sum(n_blocks), sum2(n_blocks);
  const Rng base = rng;
  parallel_blocks(n_blocks, [&](std::int64_t blk) {
    Rng r = base.child(static_cast<std::uint64_t>(blk));
    const std::int64_t lo = blk * block;
    const std::int64_t hi = std::min(n_samples, lo + block);
    std::vector<double> bs(m_bits, 0.0), bs2(m_bits, 0.0);
    double llr[6];
    for (std::int64_t i = lo; i < hi; ++i) {
      const int sym = static_cast<int>(r.uniform_int(spec.constellation.size()));
      const ChannelObservation obs = sample_output(spec, sym, r);
      open_loop_llrs(kind, spec.constellation, obs.y, obs.a, inv_ss, llr);
      const std::uint32_t label = spec.constellation.labels[sym];
      for (int m = 0; m < m_bits; ++m) {
        const double sign = ((label >> m) & 1u) ? 1.0 : -1.0;
        const double t = log2_1p_exp(sign * llr[m] * s);
        bs[m] += t;
        bs2[m] += t * t;
      }
    }
    sum[blk] = std::move(bs);
    sum2[blk] = std::move(bs2);
  });
  rng = base.child(static_cast<std::uint64_t>(n_blocks));

  ICurvePoint pt;
  pt.s = s;
  pt.per_bit.assign(m_bits, 0.0);
  pt.per_bit_stderr.assign(m_bits, 0.0);
  const double nd = static_cast<double>(n_samples);
  for (int m = 0; m < m_bits; ++m) {
    double a = 0.0, a2 = 0.0;
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      a += sum[b][m];
      a2 += sum2[b][m];
    }
    const double mean = a / nd;
    const double var = std::max(0.0, a2 / nd - mean * mean);
    pt.per_bit[m] = 1.0 - mean;
    pt.per_bit_stderr[m] = std::sqrt(var / nd);
    pt.total += pt.per_bit[m];
    pt.total_stderr += var / nd;  // per-bit terms correlated; upper bound below
  }
  pt.total_stderr = std::sqrt(pt.total_stderr) * std::sqrt(static_cast<double>(m_bits));
  return pt;
}

GmiResult gmi(const ChannelSpec& spec, DemapperKind kind, std::int64_t n_samples, Rng& rng) {
  std::vector<float> zeta;
  const Rng base = rng;
  fill_signed_llrs(spec, kind, n_samples, base, zeta);
  rng = base.child(static_cast<std::uint64_t>((n_samples >> 15) + 1));
  return gmi_from_buffer(zeta, spec.constellation.bits_per_symbol);
}

MiResult cm_mutual_info(const ChannelSpec& spec, std::int64_t n_samples, Rng& rng) {
  const AlphaEstimate est = channel_entropy_alpha(spec, n_samples, rng);
  const int m_bits = spec.constellation.bits_per_symbol;
  return MiResult{m_bits * (1.0 - est.alpha), m_bits * est.stderr_};
}

NoiseThreshold noise_threshold(const ChannelSpec& spec_template, DemapperKind kind,
                               double rate, ThresholdMode mode, std::int64_t n_samples,
                               std::uint64_t seed) {
  if (!(rate > 0.0 && rate < 1.0))
    throw std::invalid_argument("noise_threshold: rate must be in (0,1) per channel bit");
  const int m_bits = spec_template.constellation.bits_per_symbol;

  // Rate per channel bit at a given sigma; common random numbers across
  // sigma (the same child-seed layout regenerates the same draws).
  auto rate_at = [&](double ebn0_db, std::int64_t samples, double* stderr_out) {
    ChannelSpec spec = spec_template;
    spec.sigma = ebn0_to_sigma(ebn0_db, rate, m_bits);
    if (mode == ThresholdMode::Cm) {
      Rng rng(seed);
      const MiResult mi = cm_mutual_info(spec, samples, rng);
      if (stderr_out) *stderr_out = mi.stderr_ / m_bits;
      return mi.value / m_bits;
    }
    std::vector<float> zeta;
    fill_signed_llrs(spec, kind, samples, Rng(seed), zeta);
    const GmiResult g = gmi_from_buffer(zeta, m_bits);
    if (stderr_out) *stderr_out = g.stderr_ / m_bits;
    return g.value / m_bits;
  };

  // Bracket: rate_at is increasing in Eb/N0. Coarse steps run on a reduced
  // sample count; the full budget is spent once the bracket is tight.
  const std::int64_t n_coarse = std::max<std::int64_t>(n_samples / 25, 200'000);
  double lo = -2.0, hi = 12.0;
  for (int k = 0; k < 8 && rate_at(lo, n_coarse, nullptr) > rate; ++k) lo -= 4.0;
  for (int k = 0; k < 8 && rate_at(hi, n_coarse, nullptr) < rate; ++k) hi += 4.0;
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    const std::int64_t samples = (hi - lo) > 0.16 ? n_coarse : n_samples;
    (rate_at(mid, samples, nullptr) < rate ? lo : hi) = mid;
  }

  NoiseThreshold result;
  result.ebn0_db = 0.5 * (lo + hi);
  result.sigma_star = ebn0_to_sigma(result.ebn0_db, rate, m_bits);
  result.samples = n_samples;
  rate_at(result.ebn0_db, n_samples, &result.stderr_);
  return result;
}

}  // namespace bicm
