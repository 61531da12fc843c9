#include "bicm/demapper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bicm/mathutil.hpp"
#include "bicm/parallel.hpp"

namespace bicm {

DemapperKind parse_demapper(const std::string& name) {
  std::string s;
  for (char ch : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (s == "map") return DemapperKind::MapOptimal;
  if (s == "mlm" || s == "maxlog") return DemapperKind::MaxLogMap;
  throw std::invalid_argument("unsupported demapper: " + name + " (use map, mlm)");
}

const char* demapper_name(DemapperKind kind) {
  return kind == DemapperKind::MapOptimal ? "map" : "mlm";
}

namespace {

// Infinite priors are clamped to +-kPriorClamp before entering the exponent
// sums: the residual error is e^-300, far below the LLR grid saturation, and
// it keeps the extrinsic cancellation free of inf - inf.
constexpr double kPriorClamp = 300.0;

struct BitLlrScratch {
  double chan[64];
  double lp0[6], lp1[6], prior_llr[6];
  double s0[6], s1[6];
};

// Computes extrinsic LLRs for all M bits of one observation.
//
// With P(x') = exp(chan(x') + sum_l lp_l(b_l(x'))), the per-bit prior factor
// is constant over each half of the partition, so
//   llr_m = ln sum_{X0m} P - ln sum_{X1m} P - prior_llr[m]
// (and the same identity holds with max in place of sum for max-log-MAP).
void all_bit_llrs(DemapperKind kind, const Constellation& c, std::complex<double> y,
                  std::complex<double> a, double inv_sigma_sq, const double* prior_llr,
                  bool have_prior, double* out, BitLlrScratch& sc) {
  const int n = c.size();
  const int m_bits = c.bits_per_symbol;

  if (have_prior) {
    for (int l = 0; l < m_bits; ++l) {
      const double v = std::clamp(prior_llr[l], -kPriorClamp, kPriorClamp);
      sc.prior_llr[l] = v;
      sc.lp0[l] = -log1p_exp(-v);
      sc.lp1[l] = -log1p_exp(v);
    }
  }

  double emax = -HUGE_VAL;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> d = y - a * c.symbols[i];
    double e = -(d.real() * d.real() + d.imag() * d.imag()) * inv_sigma_sq;
    if (have_prior) {
      const std::uint32_t label = c.labels[i];
      for (int l = 0; l < m_bits; ++l) e += ((label >> l) & 1u) ? sc.lp1[l] : sc.lp0[l];
    }
    sc.chan[i] = e;
    emax = std::max(emax, e);
  }

  if (kind == DemapperKind::MapOptimal) {
    for (int m = 0; m < m_bits; ++m) sc.s0[m] = sc.s1[m] = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = fast_exp(sc.chan[i] - emax);
      const std::uint32_t label = c.labels[i];
      for (int m = 0; m < m_bits; ++m) {
        (((label >> m) & 1u) ? sc.s1[m] : sc.s0[m]) += p;
      }
    }
    for (int m = 0; m < m_bits; ++m) {
      double llr = fast_log(sc.s0[m]) - fast_log(sc.s1[m]);
      if (have_prior) llr -= sc.prior_llr[m];
      out[m] = llr;
    }
  } else {
    for (int m = 0; m < m_bits; ++m) {
      sc.s0[m] = -HUGE_VAL;
      sc.s1[m] = -HUGE_VAL;
    }
    for (int i = 0; i < n; ++i) {
      const double e = sc.chan[i];
      const std::uint32_t label = c.labels[i];
      for (int m = 0; m < m_bits; ++m) {
        double& best = ((label >> m) & 1u) ? sc.s1[m] : sc.s0[m];
        best = std::max(best, e);
      }
    }
    for (int m = 0; m < m_bits; ++m) {
      double llr = sc.s0[m] - sc.s1[m];
      if (have_prior) llr -= sc.prior_llr[m];
      out[m] = llr;
    }
  }
}

}  // namespace

double bit_llr(DemapperKind kind, const Constellation& c, const ChannelObservation& obs,
               double sigma, int m, const PriorVector& prior) {
  if (!std::isfinite(obs.y.real()) || !std::isfinite(obs.y.imag()))
    throw std::invalid_argument("bit_llr: non-finite observation");
  if (m < 0 || m >= c.bits_per_symbol) throw std::out_of_range("bit_llr: bit index");
  BitLlrScratch sc;
  double prior_llr[6];
  const bool have_prior = !prior.is_all_zero();
  if (have_prior) {
    if (prior.size() != c.bits_per_symbol)
      throw std::invalid_argument("bit_llr: prior size mismatch");
    for (int l = 0; l < c.bits_per_symbol; ++l) prior_llr[l] = prior[l];
  }
  double out[6];
  all_bit_llrs(kind, c, obs.y, obs.a, 1.0 / (sigma * sigma), prior_llr, have_prior, out, sc);
  return out[m];
}

DemapperDensities demapper_density_bundle(DemapperKind kind, const Constellation& c,
                                          Fading fading, double sigma,
                                          const LlrDensity& incoming,
                                          std::int64_t n_samples, Rng& rng) {
  if (n_samples < 10000) throw std::invalid_argument("demapper_density: need >= 1e4 samples");
  const GridSpec grid = incoming.grid();
  const int m_bits = c.bits_per_symbol;
  const double inv_ss = 1.0 / (sigma * sigma);

  // Delta at zero means no decoder feedback: the prior factors drop out and
  // no rng words are spent on prior draws.
  const LlrDensity zero = delta_density(grid, DeltaKind::Zero);
  const bool have_prior = l1_distance(incoming, zero) > 0.0;
  const DensitySampler sampler(have_prior ? incoming : zero);

  const std::int64_t block = 1 << 15;
  const std::int64_t n_blocks = (n_samples + block - 1) / block;
  std::vector<std::vector<LlrDensity>> partial(
      n_blocks, std::vector<LlrDensity>(m_bits, LlrDensity(grid)));
  const Rng base = rng;
  const ChannelSpec spec{c, fading, sigma};

  parallel_blocks(n_blocks, [&](std::int64_t blk) {
    Rng r = base.child(static_cast<std::uint64_t>(blk));
    const std::int64_t lo = blk * block;
    const std::int64_t hi = std::min(n_samples, lo + block);
    BitLlrScratch sc;
    double prior_llr[6], llr[6];
    auto& hist = partial[blk];
    for (std::int64_t i = lo; i < hi; ++i) {
      const int sym = static_cast<int>(r.uniform_int(c.size()));
      const ChannelObservation obs = sample_output(spec, sym, r);
      const std::uint32_t label = c.labels[sym];
      if (have_prior) {
        for (int l = 0; l < m_bits; ++l) {
          const double v = sampler.draw(r);
          prior_llr[l] = ((label >> l) & 1u) ? -v : v;
        }
      }
      all_bit_llrs(kind, c, obs.y, obs.a, inv_ss, prior_llr, have_prior, llr, sc);
      for (int m = 0; m < m_bits; ++m) {
        const double t = ((label >> m) & 1u) ? -llr[m] : llr[m];
        hist[m].deposit(t, 1.0);
      }
    }
  });
  rng = base.child(static_cast<std::uint64_t>(n_blocks));

  DemapperDensities result;
  result.per_bit.assign(m_bits, LlrDensity(grid));
  const double inv_n = 1.0 / static_cast<double>(n_samples);
  for (std::int64_t blk = 0; blk < n_blocks; ++blk) {
    for (int m = 0; m < m_bits; ++m) result.per_bit[m].accumulate(partial[blk][m], inv_n);
  }
  result.avg = LlrDensity(grid);
  for (int m = 0; m < m_bits; ++m) result.avg.accumulate(result.per_bit[m], 1.0 / m_bits);
  return result;
}

LlrDensity demapper_density(DemapperKind kind, const Constellation& c, Fading fading,
                            double sigma, int m, const LlrDensity& incoming,
                            std::int64_t n_samples, Rng& rng) {
  if (m < 0 || m >= c.bits_per_symbol) throw std::out_of_range("demapper_density: bit index");
  return demapper_density_bundle(kind, c, fading, sigma, incoming, n_samples, rng)
      .per_bit[m];
}

LlrDensity demapper_density_avg(DemapperKind kind, const Constellation& c, Fading fading,
                                double sigma, const LlrDensity& incoming,
                                std::int64_t n_samples, Rng& rng) {
  return demapper_density_bundle(kind, c, fading, sigma, incoming, n_samples, rng).avg;
}

}  // namespace bicm
