#include "bicm/de_flat.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace bicm {

namespace {

std::vector<LlrDensity> refreshed_cache(const LlrDensity& incoming, const ChannelSpec& channel,
                                        DemapperKind kind, const DeOptions& opts,
                                        int refresh_count) {
  Rng rng = Rng(opts.seed).child(1000 + static_cast<std::uint64_t>(refresh_count));
  return demapper_density_bundle(kind, channel.constellation, channel.fading, channel.sigma,
                                 incoming, opts.phi_samples, rng)
      .per_bit;
}

LlrDensity average_of(const std::vector<LlrDensity>& per_bit) {
  LlrDensity avg(per_bit.front().grid());
  const double w = 1.0 / static_cast<double>(per_bit.size());
  for (const auto& d : per_bit) avg.accumulate(d, w);
  return avg;
}

}  // namespace

DeState de_init(const DegreeProfile& profile, const ChannelSpec& channel, DemapperKind kind,
                const DeSchedule& schedule, const DeOptions& opts) {
  profile.validate();
  (void)schedule;
  DeState state;
  const LlrDensity zero = delta_density(opts.grid, DeltaKind::Zero);
  state.demapper_cache = refreshed_cache(zero, channel, kind, opts, 0);
  state.refresh_count = 1;
  // a^(0)_m = phi_m(Delta_0) (*) Delta_0: iteration starts from the
  // intrinsic demapper output.
  state.per_bit = state.demapper_cache;
  state.avg = average_of(state.per_bit);
  state.iteration = 0;
  return state;
}

DeState de_step(const DeState& state, const DegreeProfile& profile, const ChannelSpec& channel,
                DemapperKind kind, const DeSchedule& schedule, const DeOptions& opts) {
  if (state.per_bit.empty()) throw std::invalid_argument("de_step: uninitialized state");
  DeState next;
  next.refresh_count = state.refresh_count;

  const LlrDensity rho = apply_profile(profile, ProfileSide::ChkEdge, state.avg);

  if (schedule.mode == DeSchedule::Mode::Id && state.iteration > 0 &&
      state.iteration % schedule.id_period == 0) {
    const LlrDensity to_demapper = apply_profile(profile, ProfileSide::VarNode, rho);
    next.demapper_cache = refreshed_cache(to_demapper, channel, kind, opts, state.refresh_count);
    next.refresh_count = state.refresh_count + 1;
  } else {
    next.demapper_cache = state.demapper_cache;
  }

  const LlrDensity lam = apply_profile(profile, ProfileSide::VarEdge, rho);
  next.per_bit.reserve(state.per_bit.size());
  for (const auto& chan_m : next.demapper_cache) next.per_bit.push_back(var_conv(chan_m, lam));
  next.avg = average_of(next.per_bit);
  next.iteration = state.iteration + 1;
  return next;
}

DeResult de_converges(const DegreeProfile& profile, const ChannelSpec& channel,
                      DemapperKind kind, const DeSchedule& schedule, const DeOptions& opts) {
  DeState state = de_init(profile, channel, kind, schedule, opts);
  std::deque<double> history;
  DeResult res;
  for (int it = 0; it < schedule.max_iters; ++it) {
    state = de_step(state, profile, channel, kind, schedule, opts);
    const double err = error_prob(state.avg);
    res.iterations = state.iteration;
    res.final_error_prob = err;
    if (err < schedule.epsilon) {
      res.success = true;
      return res;
    }
    if (opts.stall_window > 0) {
      history.push_back(err);
      if (static_cast<int>(history.size()) > opts.stall_window) {
        const double before = history.front();
        history.pop_front();
        if (err > before * (1.0 - opts.stall_rel) && err > 1e3 * schedule.epsilon) {
          return res;  // flat fixed point; converging runs keep improving
        }
      }
    }
  }
  return res;
}

BpThreshold bp_threshold(const DegreeProfile& profile, const ChannelSpec& spec_template,
                         DemapperKind kind, const DeSchedule& schedule, const DeOptions& opts,
                         double granularity_db) {
  const double rate = profile.design_rate();
  const int m_bits = spec_template.constellation.bits_per_symbol;
  int last_iters = 0;
  auto succeeds = [&](double ebn0_db) {
    ChannelSpec spec = spec_template;
    spec.sigma = ebn0_to_sigma(ebn0_db, rate, m_bits);
    const DeResult r = de_converges(profile, spec, kind, schedule, opts);
    if (r.success) last_iters = r.iterations;
    return r.success;
  };

  double lo = 0.0, hi = 6.0;  // lo must fail, hi must succeed
  for (int k = 0; k < 10 && succeeds(lo); ++k) {
    hi = lo;
    lo -= 2.0;
  }
  for (int k = 0; k < 12 && !succeeds(hi); ++k) {
    lo = hi;
    hi += 2.0;
  }
  if (hi - lo > 100.0) throw std::runtime_error("bp_threshold: could not bracket threshold");
  while (hi - lo > granularity_db) {
    const double mid = 0.5 * (lo + hi);
    (succeeds(mid) ? hi : lo) = mid;
  }
  BpThreshold out;
  out.ebn0_db = hi;  // smallest Eb/N0 observed to converge
  out.sigma = ebn0_to_sigma(out.ebn0_db, rate, m_bits);
  out.iters_at_threshold = last_iters;
  return out;
}

}  // namespace bicm
