#include "bicm/gexit.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "bicm/mathutil.hpp"
#include "bicm/parallel.hpp"

namespace bicm {

namespace {

constexpr double kPriorClamp = 300.0;

// log2 of the extrinsic-posterior ratio sum_x' u[x'] p(y|x') / (u[x] p(y|x)),
// with everything in exponent space (normalizations cancel).
double log_ratio_bits(const Constellation& c, std::complex<double> y, std::complex<double> a,
                      double inv_sigma_sq, const double* lu, int sym) {
  const int n = c.size();
  double e[64];
  double emax = -HUGE_VAL;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> d = y - a * c.symbols[i];
    e[i] = lu[i] - (d.real() * d.real() + d.imag() * d.imag()) * inv_sigma_sq;
    emax = std::max(emax, e[i]);
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += fast_exp(e[i] - emax);
  return (fast_log(sum) + emax - e[sym]) * kLog2E;
}

}  // namespace

GexitValue gexit_functional(const ExtrinsicProductDensity& ext, const ChannelSpec& spec,
                            const AlphaModel& alpha_model, std::int64_t n_samples,
                            double target_dalpha, Rng& rng) {
  const Constellation& c = spec.constellation;
  const int m_bits = c.bits_per_symbol;
  if (static_cast<int>(ext.per_bit.size()) != m_bits)
    throw std::invalid_argument("gexit_functional: extrinsic density arity mismatch");
  if (n_samples < 10000) throw std::invalid_argument("gexit_functional: need >= 1e4 samples");

  const double dalpha_dsigma = alpha_model.dalpha_dsigma(spec.sigma);
  if (!(dalpha_dsigma > 0.0))
    throw std::invalid_argument("gexit_functional: channel parameter at a boundary");
  const double delta_sigma = target_dalpha / dalpha_dsigma;
  const double inv_ss = 1.0 / (spec.sigma * spec.sigma);

  std::vector<DensitySampler> samplers;
  samplers.reserve(m_bits);
  for (const auto& d : ext.per_bit) samplers.emplace_back(d);

  const std::int64_t block = 1 << 14;
  const std::int64_t n_blocks = (n_samples + block - 1) / block;
  std::vector<double> sum(n_blocks, 0.0), sum2(n_blocks, 0.0);
  const Rng base = rng;
  parallel_blocks(n_blocks, [&](std::int64_t blk) {
    Rng r = base.child(static_cast<std::uint64_t>(blk));
    const std::int64_t lo = blk * block;
    const std::int64_t hi = std::min(n_samples, lo + block);
    double lp0[6], lp1[6], lu[64];
    double bs = 0.0, bs2 = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      const int sym = static_cast<int>(r.uniform_int(c.size()));
      const std::uint32_t label = c.labels[sym];
      const std::complex<double> a = spec.fading == Fading::RayleighPerfectCsi
                                         ? r.complex_normal()
                                         : std::complex<double>(1.0, 0.0);
      const std::complex<double> z0 = r.complex_normal();
      for (int m = 0; m < m_bits; ++m) {
        double v = samplers[m].draw(r);
        if ((label >> m) & 1u) v = -v;  // back to ln(P0/P1) for the true bits
        v = std::clamp(v, -kPriorClamp, kPriorClamp);
        lp0[m] = -log1p_exp(-v);
        lp1[m] = -log1p_exp(v);
      }
      for (int x = 0; x < c.size(); ++x) {
        const std::uint32_t lx = c.labels[x];
        double s = 0.0;
        for (int m = 0; m < m_bits; ++m) s += ((lx >> m) & 1u) ? lp1[m] : lp0[m];
        lu[x] = s;
      }
      const std::complex<double> xs = c.symbols[sym];
      const double lp = log_ratio_bits(c, a * xs + (spec.sigma + delta_sigma) * z0, a,
                                       inv_ss, lu, sym);
      const double lm = log_ratio_bits(c, a * xs + (spec.sigma - delta_sigma) * z0, a,
                                       inv_ss, lu, sym);
      const double gs = (lp - lm) / (2.0 * delta_sigma * dalpha_dsigma * m_bits);
      bs += gs;
      bs2 += gs * gs;
    }
    sum[blk] = bs;
    sum2[blk] = bs2;
  });
  rng = base.child(static_cast<std::uint64_t>(n_blocks));

  double s = 0.0, s2 = 0.0;
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    s += sum[b];
    s2 += sum2[b];
  }
  const double nd = static_cast<double>(n_samples);
  GexitValue out;
  out.g = s / nd;
  out.stderr_ = std::sqrt(std::max(0.0, s2 / nd - out.g * out.g) / nd);
  return out;
}

// ---------------------------------------------------------------------------
// Curve tracing.

namespace {

struct FlatFp {
  std::vector<LlrDensity> per_bit;
  LlrDensity extrinsic;  // L(rho(avg)) at the fixed point
  bool decoded = false;
  bool converged = true;
  int iterations = 0;
};

FlatFp run_flat_fp(const DegreeProfile& profile, const ChannelSpec& spec, DemapperKind kind,
                   const DeOptions& dopts, const DeSchedule& schedule,
                   const std::vector<LlrDensity>* warm) {
  Rng rng = Rng(dopts.seed).child(1000);  // same phi draws at every alpha
  const LlrDensity zero = delta_density(dopts.grid, DeltaKind::Zero);
  const auto cache = demapper_density_bundle(kind, spec.constellation, spec.fading, spec.sigma,
                                             zero, dopts.phi_samples, rng)
                         .per_bit;
  FlatFp fp;
  fp.per_bit = warm != nullptr ? *warm : cache;
  const int m_bits = spec.constellation.bits_per_symbol;
  LlrDensity avg(dopts.grid);
  for (const auto& d : fp.per_bit) avg.accumulate(d, 1.0 / m_bits);

  constexpr double kFpTol = 1e-8;
  for (int it = 0; it < schedule.max_iters; ++it) {
    const LlrDensity rho = apply_profile(profile, ProfileSide::ChkEdge, avg);
    const LlrDensity lam = apply_profile(profile, ProfileSide::VarEdge, rho);
    LlrDensity next_avg(dopts.grid);
    for (int m = 0; m < m_bits; ++m) {
      fp.per_bit[static_cast<std::size_t>(m)] = var_conv(cache[static_cast<std::size_t>(m)], lam);
      next_avg.accumulate(fp.per_bit[static_cast<std::size_t>(m)], 1.0 / m_bits);
    }
    const double delta = l1_distance(next_avg, avg);
    avg = std::move(next_avg);
    fp.iterations = it + 1;
    if (error_prob(avg) < schedule.epsilon) {
      fp.decoded = true;
      break;
    }
    if (delta < kFpTol) break;
    if (it + 1 == schedule.max_iters) fp.converged = false;
  }
  const LlrDensity rho = apply_profile(profile, ProfileSide::ChkEdge, avg);
  fp.extrinsic = apply_profile(profile, ProfileSide::VarNode, rho);
  return fp;
}

struct ScFp {
  std::vector<LlrDensity> half_chain;       // positions 0..L
  std::vector<LlrDensity> extrinsic_half;   // L(x_i) per position 0..L
  bool decoded = false;
  bool converged = true;
  int iterations = 0;
};

ScFp run_sc_fp(const ScEnsemble& ens, const ChannelSpec& spec, DemapperKind kind,
               const DeOptions& dopts, const DeSchedule& schedule,
               const std::vector<LlrDensity>* warm) {
  const int big_l = ens.half_width;
  const int w = ens.w;
  const double inv_w = 1.0 / w;
  const GridSpec grid = dopts.grid;
  Rng rng = Rng(dopts.seed).child(1000);
  const LlrDensity zero = delta_density(grid, DeltaKind::Zero);
  const LlrDensity boundary = delta_density(grid, DeltaKind::PlusInfinity);
  const LlrDensity channel_avg =
      demapper_density_bundle(kind, spec.constellation, spec.fading, spec.sigma, zero,
                              dopts.phi_samples, rng)
          .avg;

  ScFp fp;
  fp.half_chain = warm != nullptr ? *warm : std::vector<LlrDensity>(big_l + 1, channel_avg);
  auto at = [&](int i) -> const LlrDensity& {
    const int k = std::abs(i);
    return k > big_l ? boundary : fp.half_chain[static_cast<std::size_t>(k)];
  };

  const int n_r = big_l + w;
  std::vector<LlrDensity> r(n_r, LlrDensity(grid));
  std::vector<LlrDensity> x(big_l + 1, LlrDensity(grid));
  constexpr double kFpTol = 1e-8;
  for (int it = 0; it < schedule.max_iters; ++it) {
    parallel_blocks(n_r, [&](std::int64_t t) {
      LlrDensity c(grid);
      for (int k = 0; k < w; ++k) c.accumulate(at(static_cast<int>(t) - k), inv_w);
      LlrDensity p = c;
      for (int k = 1; k < ens.dr - 1; ++k) p = chk_conv(p, c);
      r[static_cast<std::size_t>(t)] = std::move(p);
    });
    std::vector<LlrDensity> updated(big_l + 1, LlrDensity(grid));
    parallel_blocks(big_l + 1, [&](std::int64_t i) {
      LlrDensity xi(grid);
      for (int j = 0; j < w; ++j) xi.accumulate(r[static_cast<std::size_t>(i + j)], inv_w);
      LlrDensity lam = xi;
      for (int k = 1; k < ens.dl - 1; ++k) lam = var_conv(lam, xi);
      updated[static_cast<std::size_t>(i)] = var_conv(channel_avg, lam);
      x[static_cast<std::size_t>(i)] = std::move(xi);
    });
    double delta = 0.0, max_err = 0.0;
    for (int i = 0; i <= big_l; ++i) {
      delta = std::max(delta, l1_distance(updated[static_cast<std::size_t>(i)],
                                          fp.half_chain[static_cast<std::size_t>(i)]));
      fp.half_chain[static_cast<std::size_t>(i)] = std::move(updated[static_cast<std::size_t>(i)]);
      max_err = std::max(max_err, error_prob(fp.half_chain[static_cast<std::size_t>(i)]));
    }
    fp.iterations = it + 1;
    if (max_err < schedule.epsilon) {
      fp.decoded = true;
      break;
    }
    if (delta < kFpTol) break;
    if (it + 1 == schedule.max_iters) fp.converged = false;
  }

  // Extrinsic L(x_i) = x_i^{(*) dl} per position at the fixed point.
  fp.extrinsic_half.assign(big_l + 1, LlrDensity(grid));
  parallel_blocks(big_l + 1, [&](std::int64_t i) {
    LlrDensity p = x[static_cast<std::size_t>(i)];
    for (int k = 1; k < ens.dl; ++k) p = var_conv(p, x[static_cast<std::size_t>(i)]);
    fp.extrinsic_half[static_cast<std::size_t>(i)] = std::move(p);
  });
  return fp;
}

struct TraceHooks {
  // Returns (g point, warm state consumed/updated).
  virtual GexitPoint eval(double alpha, bool warm_from_previous) = 0;
  virtual ~TraceHooks() = default;
};

GexitCurve trace_curve(TraceHooks& hooks, const GexitGridOptions& gopts, GexitCurve curve) {
  // Descending sweep from alpha_max; stop once decoding succeeds (g = 0).
  std::vector<GexitPoint> pts;
  const double step = (gopts.alpha_max - gopts.alpha_min) / std::max(1, gopts.n_points - 1);
  double prev_alpha = gopts.alpha_max;
  bool jumped = false;
  for (int k = 0; k < gopts.n_points; ++k) {
    const double alpha = gopts.alpha_max - k * step;
    GexitPoint p = hooks.eval(alpha, k > 0);
    pts.push_back(p);
    if (p.g <= 0.0) {
      jumped = true;
      break;
    }
    prev_alpha = alpha;
  }
  // Resolve the jump between the last live point and the first decoded one.
  if (jumped) {
    double hi = prev_alpha;          // g > 0
    double lo = pts.back().alpha;    // g == 0
    while (hi - lo > gopts.jump_width) {
      const double mid = 0.5 * (lo + hi);
      GexitPoint p = hooks.eval(mid, true);
      pts.push_back(p);
      (p.g > 0.0 ? hi : lo) = mid;
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const GexitPoint& a, const GexitPoint& b) { return a.alpha < b.alpha; });

  // Refine where the curve moves fast (warm start from the point below).
  int budget = gopts.max_refine_points;
  bool changed = true;
  while (changed && budget > 0) {
    changed = false;
    for (std::size_t k = 0; k + 1 < pts.size() && budget > 0; ++k) {
      if (pts[k].g <= 0.0 && pts[k + 1].g <= 0.0) continue;
      const double da = pts[k + 1].alpha - pts[k].alpha;
      if (std::abs(pts[k + 1].g - pts[k].g) > gopts.refine_dg && da > 2e-3) {
        const double mid = 0.5 * (pts[k].alpha + pts[k + 1].alpha);
        GexitPoint p = hooks.eval(mid, true);
        pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(k) + 1, p);
        --budget;
        changed = true;
        ++k;
      }
    }
  }
  curve.points = std::move(pts);
  return curve;
}

}  // namespace

GexitCurve bp_gexit_curve(const DegreeProfile& profile, const ChannelSpec& spec_template,
                          DemapperKind kind, const GexitGridOptions& gopts,
                          const DeSchedule& schedule, const DeOptions& dopts,
                          const GexitOptions& kopts) {
  profile.validate();
  const AlphaModel am(spec_template.constellation, spec_template.fading, kopts.alpha_samples,
                      Rng(kopts.seed).child(7).next_u64());
  const int m_bits = spec_template.constellation.bits_per_symbol;

  struct Hooks final : TraceHooks {
    const DegreeProfile& profile;
    const ChannelSpec& templ;
    DemapperKind kind;
    const DeSchedule& schedule;
    const DeOptions& dopts;
    const GexitOptions& kopts;
    const AlphaModel& am;
    int m_bits;
    std::optional<std::vector<LlrDensity>> warm;
    int counter = 0;

    Hooks(const DegreeProfile& p, const ChannelSpec& t, DemapperKind k, const DeSchedule& s,
          const DeOptions& d, const GexitOptions& ko, const AlphaModel& a, int mb)
        : profile(p), templ(t), kind(k), schedule(s), dopts(d), kopts(ko), am(a), m_bits(mb) {}

    GexitPoint eval(double alpha, bool warm_from_previous) override {
      GexitPoint pt;
      pt.alpha = alpha;
      pt.sigma = am.sigma_from_alpha(alpha);
      ChannelSpec spec = templ;
      spec.sigma = pt.sigma;
      const FlatFp fp = run_flat_fp(profile, spec, kind, dopts, schedule,
                                    warm_from_previous && warm ? &*warm : nullptr);
      pt.de_converged = fp.converged;
      pt.de_iterations = fp.iterations;
      if (fp.decoded) {
        pt.g = 0.0;
        pt.stderr_ = 0.0;
        // Do not warm-start later points from the decoded state.
      } else {
        warm = fp.per_bit;
        Rng krng = Rng(kopts.seed).child(40000 + static_cast<std::uint64_t>(counter++));
        const auto ext = ExtrinsicProductDensity::shared(fp.extrinsic, m_bits);
        const GexitValue v =
            gexit_functional(ext, spec, am, kopts.kernel_samples, kopts.target_dalpha, krng);
        pt.g = std::max(0.0, v.g);
        pt.stderr_ = v.stderr_;
      }
      return pt;
    }
  } hooks(profile, spec_template, kind, schedule, dopts, kopts, am, m_bits);

  GexitCurve curve;
  curve.ensemble = "ldpc";
  curve.channel = fading_name(spec_template.fading);
  curve.demapper = demapper_name(kind);
  curve.design_rate = profile.design_rate();
  curve.bits_per_symbol = m_bits;
  curve.seed = kopts.seed;
  return trace_curve(hooks, gopts, std::move(curve));
}

GexitCurve bp_gexit_curve(const ScEnsemble& ens, const ChannelSpec& spec_template,
                          DemapperKind kind, const GexitGridOptions& gopts,
                          const DeSchedule& schedule, const DeOptions& dopts,
                          const GexitOptions& kopts) {
  ens.validate();
  const AlphaModel am(spec_template.constellation, spec_template.fading, kopts.alpha_samples,
                      Rng(kopts.seed).child(7).next_u64());
  const int m_bits = spec_template.constellation.bits_per_symbol;

  struct Hooks final : TraceHooks {
    const ScEnsemble& ens;
    const ChannelSpec& templ;
    DemapperKind kind;
    const DeSchedule& schedule;
    const DeOptions& dopts;
    const GexitOptions& kopts;
    const AlphaModel& am;
    int m_bits;
    std::optional<std::vector<LlrDensity>> warm;
    int counter = 0;

    Hooks(const ScEnsemble& e, const ChannelSpec& t, DemapperKind k, const DeSchedule& s,
          const DeOptions& d, const GexitOptions& ko, const AlphaModel& a, int mb)
        : ens(e), templ(t), kind(k), schedule(s), dopts(d), kopts(ko), am(a), m_bits(mb) {}

    GexitPoint eval(double alpha, bool warm_from_previous) override {
      GexitPoint pt;
      pt.alpha = alpha;
      pt.sigma = am.sigma_from_alpha(alpha);
      ChannelSpec spec = templ;
      spec.sigma = pt.sigma;
      const ScFp fp = run_sc_fp(ens, spec, kind, dopts, schedule,
                                warm_from_previous && warm ? &*warm : nullptr);
      pt.de_converged = fp.converged;
      pt.de_iterations = fp.iterations;
      if (fp.decoded) {
        pt.g = 0.0;
        pt.stderr_ = 0.0;
        return pt;
      }
      warm = fp.half_chain;
      const int big_l = ens.half_width;
      const std::int64_t per_pos =
          std::max<std::int64_t>(kopts.kernel_samples / (big_l + 1), 30000);
      double g = 0.0, var = 0.0;
      const double norm = 1.0 / (2.0 * big_l + 1.0);
      for (int i = 0; i <= big_l; ++i) {
        Rng krng = Rng(kopts.seed).child(40000 + 4096ull * static_cast<std::uint64_t>(counter) +
                                         static_cast<std::uint64_t>(i));
        const auto ext = ExtrinsicProductDensity::shared(
            fp.extrinsic_half[static_cast<std::size_t>(i)], m_bits);
        const GexitValue v =
            gexit_functional(ext, spec, am, per_pos, kopts.target_dalpha, krng);
        const double weight = (i == 0 ? 1.0 : 2.0) * norm;
        g += weight * v.g;
        var += weight * weight * v.stderr_ * v.stderr_;
      }
      ++counter;
      pt.g = std::max(0.0, g);
      pt.stderr_ = std::sqrt(var);
      return pt;
    }
  } hooks(ens, spec_template, kind, schedule, dopts, kopts, am, m_bits);

  GexitCurve curve;
  curve.ensemble = "sc-ldpc";
  curve.channel = fading_name(spec_template.fading);
  curve.demapper = demapper_name(kind);
  curve.design_rate = sc_design_rate(ens);
  curve.bits_per_symbol = m_bits;
  curve.seed = kopts.seed;
  return trace_curve(hooks, gopts, std::move(curve));
}

AreaThreshold area_threshold(const GexitCurve& curve, double rate) {
  if (curve.points.empty()) throw std::invalid_argument("area_threshold: empty curve");
  if (rate <= 0.0) {
    AreaThreshold t;
    t.alpha_bar = 1.0;
    t.sigma = curve.points.back().sigma;
    t.ebn0_db = sigma_to_ebn0(t.sigma, 1e-12, curve.bits_per_symbol);
    return t;
  }

  // Tail integral T(alpha) = int_alpha^1 g, with the analytic (1,1) endpoint.
  std::vector<double> alphas, gs;
  for (const auto& p : curve.points) {
    alphas.push_back(p.alpha);
    gs.push_back(p.g);
  }
  alphas.push_back(1.0);
  gs.push_back(1.0);

  auto tail_from = [&](double alpha_bar) {
    double t = 0.0;
    for (std::size_t k = 0; k + 1 < alphas.size(); ++k) {
      const double a0 = alphas[k], a1 = alphas[k + 1];
      if (a1 <= alpha_bar) continue;
      if (a0 >= alpha_bar) {
        t += 0.5 * (gs[k] + gs[k + 1]) * (a1 - a0);
      } else {
        // Partial trapezoid from alpha_bar to a1.
        const double f = (alpha_bar - a0) / (a1 - a0);
        const double gmid = gs[k] + f * (gs[k + 1] - gs[k]);
        t += 0.5 * (gmid + gs[k + 1]) * (a1 - alpha_bar);
      }
    }
    return t;
  };

  const double total = tail_from(alphas.front());
  if (total < rate)
    throw std::runtime_error("area_threshold: curve truncated, total area below rate");

  double lo = alphas.front(), hi = 1.0;  // tail_from(lo) >= rate >= tail_from(hi)=0
  for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tail_from(mid) >= rate ? lo : hi) = mid;
  }
  AreaThreshold t;
  t.alpha_bar = 0.5 * (lo + hi);

  // Interpolate sigma(alpha_bar) from the bracketing curve points.
  const auto& pts = curve.points;
  std::size_t k = 0;
  while (k + 1 < pts.size() && pts[k + 1].alpha < t.alpha_bar) ++k;
  if (k + 1 < pts.size()) {
    const double f = (t.alpha_bar - pts[k].alpha) / (pts[k + 1].alpha - pts[k].alpha);
    t.sigma = pts[k].sigma + f * (pts[k + 1].sigma - pts[k].sigma);
  } else {
    t.sigma = pts.back().sigma;
  }
  t.ebn0_db = sigma_to_ebn0(t.sigma, rate, curve.bits_per_symbol);
  return t;
}

}  // namespace bicm
