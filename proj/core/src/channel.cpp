#include "bicm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bicm/mathutil.hpp"
#include "bicm/parallel.hpp"

namespace bicm {

Fading parse_fading(const std::string& name) {
  std::string s;
  for (char ch : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (s == "awgn") return Fading::None;
  if (s == "rayleigh" || s == "fading") return Fading::RayleighPerfectCsi;
  throw std::invalid_argument("unsupported channel: " + name + " (use awgn, rayleigh)");
}

const char* fading_name(Fading f) {
  return f == Fading::None ? "awgn" : "rayleigh";
}

ChannelObservation sample_output(const ChannelSpec& spec, int symbol_index, Rng& rng) {
  ChannelObservation obs;
  obs.a = spec.fading == Fading::RayleighPerfectCsi ? rng.complex_normal()
                                                    : std::complex<double>(1.0, 0.0);
  const std::complex<double> z = rng.complex_normal();
  obs.y = obs.a * spec.constellation.symbols[symbol_index] + spec.sigma * z;
  return obs;
}

double ebn0_to_sigma(double ebn0_db, double code_rate, int bits_per_symbol) {
  if (!(code_rate > 0.0) || bits_per_symbol < 1)
    throw std::invalid_argument("ebn0_to_sigma: rate and bits/symbol must be positive");
  const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  return std::sqrt(1.0 / (code_rate * bits_per_symbol * ebn0));
}

double sigma_to_ebn0(double sigma, double code_rate, int bits_per_symbol) {
  if (!(code_rate > 0.0) || bits_per_symbol < 1 || !(sigma > 0.0))
    throw std::invalid_argument("sigma_to_ebn0: arguments must be positive");
  return 10.0 * std::log10(1.0 / (code_rate * bits_per_symbol * sigma * sigma));
}

namespace {

// -log2 p(x | y, a) for the transmitted symbol, uniform prior.
double symbol_entropy_bits(const Constellation& c, std::complex<double> y,
                           std::complex<double> a, double inv_sigma_sq, int sym) {
  const int n = c.size();
  double emax = -HUGE_VAL;
  double e[64];
  for (int i = 0; i < n; ++i) {
    const std::complex<double> d = y - a * c.symbols[i];
    e[i] = -(d.real() * d.real() + d.imag() * d.imag()) * inv_sigma_sq;
    emax = std::max(emax, e[i]);
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += fast_exp(e[i] - emax);
  // log p(x|y) = e[sym] - emax - log(sum)
  return (fast_log(sum) - (e[sym] - emax)) * kLog2E;
}

}  // namespace

AlphaEstimate channel_entropy_alpha(const ChannelSpec& spec, std::int64_t n_samples, Rng& rng) {
  if (n_samples < 10000) throw std::invalid_argument("channel_entropy_alpha: need >= 1e4 samples");
  const double inv_ss = 1.0 / (spec.sigma * spec.sigma);
  const double inv_m = 1.0 / spec.constellation.bits_per_symbol;

  const std::int64_t block = 1 << 16;
  const std::int64_t n_blocks = (n_samples + block - 1) / block;
  std::vector<double> sum(n_blocks, 0.0), sum2(n_blocks, 0.0);
  const Rng base = rng;
  parallel_blocks(n_blocks, [&](std::int64_t b) {
    Rng r = base.child(static_cast<std::uint64_t>(b));
    const std::int64_t lo = b * block;
    const std::int64_t hi = std::min(n_samples, lo + block);
    double s = 0.0, s2 = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      const int sym = static_cast<int>(r.uniform_int(spec.constellation.size()));
      const ChannelObservation obs = sample_output(spec, sym, r);
      const double h = symbol_entropy_bits(spec.constellation, obs.y, obs.a, inv_ss, sym) * inv_m;
      s += h;
      s2 += h * h;
    }
    sum[b] = s;
    sum2[b] = s2;
  });
  rng = base.child(static_cast<std::uint64_t>(n_blocks));  // advance caller stream

  double s = 0.0, s2 = 0.0;
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    s += sum[b];
    s2 += sum2[b];
  }
  const double n = static_cast<double>(n_samples);
  const double mean = s / n;
  const double var = std::max(0.0, s2 / n - mean * mean);
  AlphaEstimate est;
  est.alpha = std::clamp(mean, 0.0, 1.0);
  est.stderr_ = std::sqrt(var / n);
  return est;
}

AlphaModel::AlphaModel(Constellation c, Fading fading, std::int64_t n_samples, std::uint64_t seed)
    : constellation_(std::move(c)), fading_(fading) {
  if (n_samples < 10000) throw std::invalid_argument("AlphaModel: need >= 1e4 samples");
  symbol_.resize(n_samples);
  gain_.resize(n_samples);
  noise_.resize(n_samples);
  Rng rng(seed);
  for (std::int64_t i = 0; i < n_samples; ++i) {
    symbol_[i] = static_cast<std::uint8_t>(rng.uniform_int(constellation_.size()));
    gain_[i] = fading_ == Fading::RayleighPerfectCsi ? rng.complex_normal()
                                                     : std::complex<double>(1.0, 0.0);
    noise_[i] = rng.complex_normal();
  }
}

double AlphaModel::alpha(double sigma) const {
  const double inv_ss = 1.0 / (sigma * sigma);
  const double inv_m = 1.0 / constellation_.bits_per_symbol;
  const std::int64_t n = samples();
  const std::int64_t block = 1 << 15;
  const std::int64_t n_blocks = (n + block - 1) / block;
  std::vector<double> sum(n_blocks, 0.0);
  parallel_blocks(n_blocks, [&](std::int64_t b) {
    const std::int64_t lo = b * block;
    const std::int64_t hi = std::min(n, lo + block);
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::complex<double> y =
          gain_[i] * constellation_.symbols[symbol_[i]] + sigma * noise_[i];
      s += symbol_entropy_bits(constellation_, y, gain_[i], inv_ss, symbol_[i]);
    }
    sum[b] = s;
  });
  double s = 0.0;
  for (double v : sum) s += v;
  return std::clamp(s * inv_m / static_cast<double>(n), 0.0, 1.0);
}

double AlphaModel::dalpha_dsigma(double sigma) const {
  const double h = 1e-3 * sigma;
  return (alpha(sigma + h) - alpha(sigma - h)) / (2.0 * h);
}

double AlphaModel::sigma_from_alpha(double target) const {
  if (!(target > 0.0 && target < 1.0))
    throw std::invalid_argument("sigma_from_alpha: alpha must be in (0,1)");
  double lo = 1e-3, hi = 1e3;
  // alpha is increasing in sigma; expand the bracket if needed.
  while (alpha(lo) > target && lo > 1e-9) lo *= 0.5;
  while (alpha(hi) < target && hi < 1e9) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-4 * lo; ++it) {
    const double mid = std::sqrt(lo * hi);
    (alpha(mid) < target ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

double alpha_to_sigma(const ChannelSpec& spec_template, double alpha,
                      std::int64_t n_samples, std::uint64_t seed) {
  AlphaModel model(spec_template.constellation, spec_template.fading, n_samples, seed);
  return model.sigma_from_alpha(alpha);
}

}  // namespace bicm
