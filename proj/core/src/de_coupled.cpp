#include "bicm/de_coupled.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "bicm/parallel.hpp"

namespace bicm {

void ScEnsemble::validate() const {
  if (dl < 2 || dr <= dl || w < 1 || half_width < 1)
    throw std::invalid_argument("ScEnsemble requires dl >= 2, dr > dl, w >= 1, L >= 1");
}

double sc_design_rate(const ScEnsemble& ens) {
  ens.validate();
  double sum = 0.0;
  for (int i = 0; i <= ens.w; ++i)
    sum += std::pow(static_cast<double>(i) / ens.w, static_cast<double>(ens.dr));
  const double ratio = static_cast<double>(ens.dl) / ens.dr;
  return (1.0 - ratio) - ratio * (ens.w + 1.0 - 2.0 * sum) / (2.0 * ens.half_width + 1.0);
}

double sc_rate_loss_db(const ScEnsemble& ens) {
  return 10.0 * std::log10(ens.nominal_rate() / sc_design_rate(ens));
}

namespace {

LlrDensity density_power(const LlrDensity& a, int n, bool chk) {
  if (n == 0)
    return chk ? delta_density(a.grid(), DeltaKind::PlusInfinity)
               : delta_density(a.grid(), DeltaKind::Zero);
  LlrDensity p = a;
  for (int k = 1; k < n; ++k) p = chk ? chk_conv(p, a) : var_conv(p, a);
  return p;
}

LlrDensity phi_avg_for(const LlrDensity& incoming, const ChannelSpec& channel,
                       DemapperKind kind, const DeOptions& opts, std::uint64_t tag) {
  Rng rng = Rng(opts.seed).child(tag);
  return demapper_density_bundle(kind, channel.constellation, channel.fading, channel.sigma,
                                 incoming, opts.phi_samples, rng)
      .avg;
}

constexpr double kFreezeEps = 1e-12;

}  // namespace

ScState sc_init(const ScEnsemble& ens, const ChannelSpec& channel, DemapperKind kind,
                const DeSchedule& schedule, const DeOptions& opts) {
  ens.validate();
  (void)schedule;
  ScState state;
  state.ens = ens;
  const LlrDensity zero = delta_density(opts.grid, DeltaKind::Zero);
  state.channel_avg = phi_avg_for(zero, channel, kind, opts, 1000);
  state.boundary = delta_density(opts.grid, DeltaKind::PlusInfinity);
  state.refresh_count = 1;
  state.chain.assign(2 * ens.half_width + 1, state.channel_avg);
  state.iteration = 0;
  return state;
}

ScState sc_de_step(const ScState& state, const ChannelSpec& channel, DemapperKind kind,
                   const DeSchedule& schedule, const DeOptions& opts) {
  const ScEnsemble& ens = state.ens;
  const int big_l = ens.half_width;
  const double inv_w = 1.0 / ens.w;
  const GridSpec grid = state.chain.front().grid();

  // Check-side stage r_t = rho((1/w) sum_k a_{t-k}) for t in [-L, L+w-1].
  std::vector<LlrDensity> r;
  r.reserve(2 * big_l + ens.w);
  for (int t = -big_l; t <= big_l + ens.w - 1; ++t) {
    LlrDensity c(grid);
    for (int k = 0; k < ens.w; ++k) c.accumulate(state.at(t - k), inv_w);
    r.push_back(density_power(c, ens.dr - 1, true));
  }

  ScState next;
  next.ens = ens;
  next.channel_avg = state.channel_avg;
  next.boundary = state.boundary;
  next.id_cache = state.id_cache;
  next.refresh_count = state.refresh_count;
  next.iteration = state.iteration + 1;
  next.chain.assign(2 * big_l + 1, LlrDensity(grid));

  const bool refresh = schedule.mode == DeSchedule::Mode::Id && state.iteration > 0 &&
                       state.iteration % schedule.id_period == 0;
  if (refresh && next.id_cache.empty()) next.id_cache.assign(2 * big_l + 1, state.channel_avg);

  for (int i = -big_l; i <= big_l; ++i) {
    LlrDensity x(grid);
    for (int j = 0; j < ens.w; ++j) x.accumulate(r[static_cast<std::size_t>(i + j + big_l)], inv_w);
    const LlrDensity lam = density_power(x, ens.dl - 1, false);
    if (refresh) {
      next.id_cache[static_cast<std::size_t>(i + big_l)] = phi_avg_for(
          var_conv(lam, x), channel, kind, opts,
          5000 + 8192ull * static_cast<std::uint64_t>(next.refresh_count) +
              static_cast<std::uint64_t>(i + big_l));
    }
    const LlrDensity& chan = next.id_cache.empty()
                                 ? state.channel_avg
                                 : next.id_cache[static_cast<std::size_t>(i + big_l)];
    next.chain[static_cast<std::size_t>(i + big_l)] = var_conv(chan, lam);
  }
  if (refresh) next.refresh_count = state.refresh_count + 1;
  return next;
}

ScRunResult sc_converges(const ScEnsemble& ens, const ChannelSpec& channel, DemapperKind kind,
                         const DeSchedule& schedule, const DeOptions& opts) {
  ens.validate();
  const int big_l = ens.half_width;
  const int w = ens.w;
  const double inv_w = 1.0 / w;
  const GridSpec grid = opts.grid;

  const LlrDensity zero = delta_density(grid, DeltaKind::Zero);
  const LlrDensity boundary = delta_density(grid, DeltaKind::PlusInfinity);
  const LlrDensity channel_avg = phi_avg_for(zero, channel, kind, opts, 1000);

  // Half chain: a[|i|] with a_i = a_{-i}; |i| > L is the pinned boundary.
  std::vector<LlrDensity> a(big_l + 1, channel_avg);
  std::vector<LlrDensity> id_cache;
  std::vector<char> frozen(big_l + 1, 0);
  std::vector<double> err(big_l + 1, error_prob(channel_avg));
  auto at = [&](int i) -> const LlrDensity& {
    const int k = std::abs(i);
    return k > big_l ? boundary : a[static_cast<std::size_t>(k)];
  };
  auto frozen_at = [&](int i) {
    const int k = std::abs(i);
    return k > big_l ? true : frozen[static_cast<std::size_t>(k)] != 0;
  };

  // r_t persists across iterations once every contributor is frozen.
  const int n_r = big_l + w;  // t in [0, L+w-1]
  std::vector<LlrDensity> r(n_r, LlrDensity(grid));
  std::vector<char> r_valid(n_r, 0);

  std::deque<double> history;
  int refresh_count = 1;
  ScRunResult res;
  for (int it = 0; it < schedule.max_iters; ++it) {
    // Stage 1: refresh the r_t needed by some unfrozen position.
    std::vector<int> todo;
    for (int t = 0; t < n_r; ++t) {
      bool needed = false;
      for (int i = std::max(0, t - w + 1); i <= std::min(big_l, t); ++i) {
        if (!frozen[static_cast<std::size_t>(i)]) {
          needed = true;
          break;
        }
      }
      // Mirror position -i reads r over the reflected window; covered by i.
      if (!needed) continue;
      bool inputs_frozen = true;
      for (int k = 0; k < w; ++k) {
        if (!frozen_at(t - k)) {
          inputs_frozen = false;
          break;
        }
      }
      if (inputs_frozen && r_valid[t]) continue;
      todo.push_back(t);
      r_valid[t] = inputs_frozen ? 1 : 0;
    }
    parallel_blocks(static_cast<std::int64_t>(todo.size()), [&](std::int64_t n) {
      const int t = todo[static_cast<std::size_t>(n)];
      LlrDensity c(grid);
      for (int k = 0; k < w; ++k) c.accumulate(at(t - k), inv_w);
      r[t] = density_power(c, ens.dr - 1, true);
    });

    // Optional demapper refresh (BICM-ID schedule).
    const bool refresh = schedule.mode == DeSchedule::Mode::Id && it > 0 &&
                         it % schedule.id_period == 0;
    if (refresh && id_cache.empty()) id_cache.assign(big_l + 1, channel_avg);

    // Stage 2: update unfrozen positions i in [0, L].
    std::vector<int> active;
    for (int i = 0; i <= big_l; ++i)
      if (!frozen[static_cast<std::size_t>(i)]) active.push_back(i);

    std::vector<LlrDensity> updated(active.size(), LlrDensity(grid));
    std::vector<LlrDensity> lam_store(refresh ? active.size() : 0, LlrDensity(grid));
    std::vector<LlrDensity> x_store(refresh ? active.size() : 0, LlrDensity(grid));
    parallel_blocks(static_cast<std::int64_t>(active.size()), [&](std::int64_t n) {
      const int i = active[static_cast<std::size_t>(n)];
      LlrDensity x(grid);
      for (int j = 0; j < w; ++j) {
        const int t = i + j;  // t in [0, L+w-1]
        x.accumulate(r[t], inv_w);
      }
      const LlrDensity lam = density_power(x, ens.dl - 1, false);
      if (refresh) {
        lam_store[static_cast<std::size_t>(n)] = lam;
        x_store[static_cast<std::size_t>(n)] = x;
      } else {
        const LlrDensity& chan = id_cache.empty() ? channel_avg : id_cache[static_cast<std::size_t>(i)];
        updated[static_cast<std::size_t>(n)] = var_conv(chan, lam);
      }
    });
    if (refresh) {
      // Sequential over positions; the Monte-Carlo inside parallelizes.
      for (std::size_t n = 0; n < active.size(); ++n) {
        const int i = active[n];
        id_cache[static_cast<std::size_t>(i)] = phi_avg_for(
            var_conv(lam_store[n], x_store[n]), channel, kind, opts,
            5000 + 8192ull * static_cast<std::uint64_t>(refresh_count) +
                static_cast<std::uint64_t>(i + big_l));
        updated[n] = var_conv(id_cache[static_cast<std::size_t>(i)], lam_store[n]);
      }
      ++refresh_count;
    }

    double max_err = 0.0, sum_err = 0.0;
    for (std::size_t n = 0; n < active.size(); ++n) {
      const int i = active[n];
      a[static_cast<std::size_t>(i)] = std::move(updated[n]);
      err[static_cast<std::size_t>(i)] = error_prob(a[static_cast<std::size_t>(i)]);
      if (err[static_cast<std::size_t>(i)] < kFreezeEps) frozen[static_cast<std::size_t>(i)] = 1;
    }
    for (int i = 0; i <= big_l; ++i) {
      max_err = std::max(max_err, err[static_cast<std::size_t>(i)]);
      sum_err += err[static_cast<std::size_t>(i)];
    }

    res.iterations = it + 1;
    res.max_error_prob = max_err;
    if (max_err < schedule.epsilon) {
      res.success = true;
      return res;
    }
    // Wave-stall cut: a chain fixed point stops improving entirely, while a
    // live decoding wave shaves a steady fraction of the summed error.
    const int window = 400;
    history.push_back(sum_err);
    if (static_cast<int>(history.size()) > window) {
      const double before = history.front();
      history.pop_front();
      if (sum_err > before * (1.0 - 1e-4) && max_err > 1e3 * schedule.epsilon) return res;
    }
  }
  return res;
}

ScThreshold sc_bp_threshold(const ScEnsemble& ens, const ChannelSpec& spec_template,
                            DemapperKind kind, const DeSchedule& schedule,
                            const DeOptions& opts, double granularity_db) {
  const double rate = sc_design_rate(ens);
  const int m_bits = spec_template.constellation.bits_per_symbol;
  int last_iters = 0;
  auto succeeds = [&](double ebn0_db) {
    ChannelSpec spec = spec_template;
    spec.sigma = ebn0_to_sigma(ebn0_db, rate, m_bits);
    const ScRunResult r = sc_converges(ens, spec, kind, schedule, opts);
    if (r.success) last_iters = r.iterations;
    return r.success;
  };

  double lo = 0.0, hi = 6.0;
  for (int k = 0; k < 10 && succeeds(lo); ++k) {
    hi = lo;
    lo -= 2.0;
  }
  for (int k = 0; k < 12 && !succeeds(hi); ++k) {
    lo = hi;
    hi += 2.0;
  }
  if (hi - lo > 100.0) throw std::runtime_error("sc_bp_threshold: could not bracket threshold");
  while (hi - lo > granularity_db) {
    const double mid = 0.5 * (lo + hi);
    (succeeds(mid) ? hi : lo) = mid;
  }
  ScThreshold out;
  out.ebn0_db = hi;
  out.sigma = ebn0_to_sigma(out.ebn0_db, rate, m_bits);
  out.design_rate = rate;
  out.iters_at_threshold = last_iters;
  return out;
}

}  // namespace bicm
