#include "bicm/density.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "bicm/mathutil.hpp"
#include "bicm/parallel.hpp"

namespace bicm {

namespace {

void require_same_grid(const LlrDensity& a, const LlrDensity& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("density grid mismatch");
}

}  // namespace

double LlrDensity::total_mass() const {
  double s = minf_ + pinf_;
  for (double w : weights_) s += w;
  return s;
}

double LlrDensity::finite_mean() const {
  double s = 0.0;
  for (int j = 0; j < grid_.points(); ++j) s += weights_[j] * grid_.value_at(j);
  return s;
}

void LlrDensity::accumulate(const LlrDensity& other, double weight) {
  require_same_grid(*this, other);
  const int n = grid_.points();
  for (int j = 0; j < n; ++j) weights_[j] += weight * other.weights_[j];
  minf_ += weight * other.minf_;
  pinf_ += weight * other.pinf_;
}

void LlrDensity::scale(double factor) {
  for (double& w : weights_) w *= factor;
  minf_ *= factor;
  pinf_ *= factor;
}

void LlrDensity::deposit(double v, double mass) {
  if (std::isinf(v)) {
    (v > 0 ? pinf_ : minf_) += mass;
    return;
  }
  const double delta = grid_.delta();
  const int half = grid_.half_cells;
  const double pos = v / delta;  // lattice coordinate relative to zero
  if (pos <= -half) {
    weights_.front() += mass;
    return;
  }
  if (pos >= half) {
    weights_.back() += mass;
    return;
  }
  const double shifted = pos + half;
  const int k = static_cast<int>(shifted);
  const double f = shifted - k;
  weights_[k] += mass * (1.0 - f);
  weights_[k + 1] += mass * f;
}

LlrDensity delta_density(const GridSpec& grid, DeltaKind kind) {
  LlrDensity d(grid);
  if (kind == DeltaKind::PlusInfinity) {
    d.mass_plus_inf() = 1.0;
  } else {
    d.weights()[grid.half_cells] = 1.0;
  }
  return d;
}

double error_prob(const LlrDensity& a) {
  const int half = a.grid().half_cells;
  double s = a.mass_minus_inf();
  const auto& w = a.weights();
  for (int j = 0; j < half; ++j) s += w[j];
  s += 0.5 * w[half];
  return s;
}

double l1_distance(const LlrDensity& a, const LlrDensity& b) {
  require_same_grid(a, b);
  double s = std::abs(a.mass_minus_inf() - b.mass_minus_inf()) +
             std::abs(a.mass_plus_inf() - b.mass_plus_inf());
  const int n = a.grid().points();
  for (int j = 0; j < n; ++j) s += std::abs(a.weights()[j] - b.weights()[j]);
  return s;
}

double symmetry_residual(const LlrDensity& a) {
  const int half = a.grid().half_cells;
  double r = a.mass_minus_inf();  // symmetric counterpart of +inf mass is 0
  for (int i = 1; i <= half; ++i) {
    const double x = a.grid().value_at(half + i);
    r += std::abs(a.weights()[half - i] - a.weights()[half + i] * fast_exp(-x));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Variable-node convolution (FFT).

namespace {

struct FftPlan {
  int n = 0;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

std::mutex g_fft_mutex;

const FftPlan& fft_plan_for(int n) {
  static std::map<int, FftPlan> plans;
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  auto it = plans.find(n);
  if (it == plans.end()) {
    FftPlan p;
    p.n = n;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    p.fwd = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
    p.inv = fftw_plan_dft_c2r_1d(n, out, in, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    it = plans.emplace(n, p).first;
  }
  return it->second;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

LlrDensity var_conv(const LlrDensity& a, const LlrDensity& b) {
  require_same_grid(a, b);
  const GridSpec& grid = a.grid();
  const int pts = grid.points();
  const int half = grid.half_cells;

  double a_fin = 0.0, b_fin = 0.0;
  for (double w : a.weights()) a_fin += w;
  for (double w : b.weights()) b_fin += w;

  LlrDensity out(grid);
  out.mass_plus_inf() = a.mass_plus_inf() * (b.mass_plus_inf() + b_fin) +
                        b.mass_plus_inf() * a_fin;
  out.mass_minus_inf() = a.mass_minus_inf() * (b.mass_minus_inf() + b_fin) +
                         b.mass_minus_inf() * a_fin;
  // +inf plus -inf has no consistent value; send it to zero. It cannot arise
  // from all-zero-conditioned channel densities.
  out.weights()[half] += a.mass_plus_inf() * b.mass_minus_inf() +
                         a.mass_minus_inf() * b.mass_plus_inf();

  if (a_fin > 0.0 && b_fin > 0.0) {
    const int conv_len = 2 * pts - 1;
    const int n = next_pow2(conv_len);
    const FftPlan& plan = fft_plan_for(n);

    std::unique_ptr<double, FftwDeleter> ra(fftw_alloc_real(n));
    std::unique_ptr<double, FftwDeleter> rb(fftw_alloc_real(n));
    std::unique_ptr<fftw_complex, FftwDeleter> ca(fftw_alloc_complex(n / 2 + 1));
    std::unique_ptr<fftw_complex, FftwDeleter> cb(fftw_alloc_complex(n / 2 + 1));

    std::fill(ra.get(), ra.get() + n, 0.0);
    std::fill(rb.get(), rb.get() + n, 0.0);
    std::copy(a.weights().begin(), a.weights().end(), ra.get());
    std::copy(b.weights().begin(), b.weights().end(), rb.get());
    fftw_execute_dft_r2c(plan.fwd, ra.get(), ca.get());
    fftw_execute_dft_r2c(plan.fwd, rb.get(), cb.get());
    const double inv_n = 1.0 / n;
    for (int i = 0; i <= n / 2; ++i) {
      const double re = ca.get()[i][0] * cb.get()[i][0] - ca.get()[i][1] * cb.get()[i][1];
      const double im = ca.get()[i][0] * cb.get()[i][1] + ca.get()[i][1] * cb.get()[i][0];
      ca.get()[i][0] = re * inv_n;
      ca.get()[i][1] = im * inv_n;
    }
    fftw_execute_dft_c2r(plan.inv, ca.get(), ra.get());

    // conv[s] holds mass at value (s - 2*half)*delta, s in [0, 4*half].
    // Fold saturated tails into the boundary finite cells.
    auto& w = out.weights();
    const double* conv = ra.get();
    double lo_tail = 0.0, hi_tail = 0.0;
    for (int s = 0; s < half; ++s) lo_tail += conv[s];
    for (int s = 3 * half + 1; s < conv_len; ++s) hi_tail += conv[s];
    w[0] += lo_tail;
    w[2 * half] += hi_tail;
    for (int s = half; s <= 3 * half; ++s) {
      w[s - half] += std::max(conv[s], 0.0);  // clip FFT rounding noise
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Check-node convolution.

namespace {

// Requantization table for the magnitude combination
//   z(i,j) = 2 atanh(tanh(i*delta/2) tanh(j*delta/2)),
// stored as lattice index k = floor(z/delta) plus a 16-bit linear-split
// fraction. z <= min(i,j)*delta, so k fits the magnitude range.
class BoxPlusTable {
 public:
  explicit BoxPlusTable(const GridSpec& grid) : k_(grid.half_cells) {
    const double delta = grid.delta();
    packed_.resize(static_cast<std::size_t>(k_ + 1) * (k_ + 1));
    for (int i = 1; i <= k_; ++i) {
      const double mi = i * delta;
      for (int j = i; j <= k_; ++j) {
        const double mj = j * delta;
        // min + log1p(e^-(mi+mj)) - log1p(e^-(mj-mi)); stable for all args.
        const double z = mi + std::log1p(std::exp(-(mi + mj))) -
                         std::log1p(std::exp(-(mj - mi)));
        double pos = z / delta;
        if (pos < 0.0) pos = 0.0;
        if (pos > k_) pos = k_;
        auto cell = static_cast<std::uint32_t>(pos);
        const double frac = pos - cell;
        const auto f16 = static_cast<std::uint32_t>(frac * 65535.0 + 0.5);
        const std::uint32_t entry = cell | (f16 << 16);
        packed_[static_cast<std::size_t>(i) * (k_ + 1) + j] = entry;
        packed_[static_cast<std::size_t>(j) * (k_ + 1) + i] = entry;
      }
    }
  }

  const std::uint32_t* row(int i) const { return packed_.data() + static_cast<std::size_t>(i) * (k_ + 1); }

 private:
  int k_;
  std::vector<std::uint32_t> packed_;
};

const BoxPlusTable& box_plus_table(const GridSpec& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::unique_ptr<BoxPlusTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(grid.half_cells, grid.max_llr);
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (grid.half_cells > 8192)
      throw std::invalid_argument("grid too fine for check-node table (half_cells > 8192)");
    it = cache.emplace(key, std::make_unique<BoxPlusTable>(grid)).first;
  }
  return *it->second;
}

}  // namespace

LlrDensity chk_conv(const LlrDensity& a, const LlrDensity& b) {
  require_same_grid(a, b);
  const GridSpec& grid = a.grid();
  const int half = grid.half_cells;
  const BoxPlusTable& table = box_plus_table(grid);

  const auto& wa = a.weights();
  const auto& wb = b.weights();
  const double a0 = wa[half], b0 = wb[half];
  const double a_total = a.total_mass();
  const double b_total = b.total_mass();

  // Positive/negative magnitude views (magnitude index 1..half).
  std::vector<double> out_pos(half + 2, 0.0), out_neg(half + 2, 0.0);
  double out_zero = a0 * b_total + b0 * (a_total - a0);
  double out_pinf = a.mass_plus_inf() * b.mass_plus_inf() +
                    a.mass_minus_inf() * b.mass_minus_inf();
  double out_minf = a.mass_plus_inf() * b.mass_minus_inf() +
                    a.mass_minus_inf() * b.mass_plus_inf();

  // +inf acts as identity, -inf as sign flip, on the other side's
  // finite nonzero mass.
  for (int i = 1; i <= half; ++i) {
    const double ap = wa[half + i], an = wa[half - i];
    const double bp = wb[half + i], bn = wb[half - i];
    out_pos[i] += a.mass_plus_inf() * bp + a.mass_minus_inf() * bn +
                  b.mass_plus_inf() * ap + b.mass_minus_inf() * an;
    out_neg[i] += a.mass_plus_inf() * bn + a.mass_minus_inf() * bp +
                  b.mass_plus_inf() * an + b.mass_minus_inf() * ap;
  }

  // Support bounds for the pairwise pass.
  int b_lo = 1, b_hi = half;
  while (b_hi >= 1 && wb[half + b_hi] == 0.0 && wb[half - b_hi] == 0.0) --b_hi;
  while (b_lo <= b_hi && wb[half + b_lo] == 0.0 && wb[half - b_lo] == 0.0) ++b_lo;

  constexpr double kRowCut = 1e-21;  // dropped mass bounded by half_cells * cut
  if (b_hi >= b_lo) {
    // Row-partitioned across workers; per-chunk scratch keeps the reduction
    // deterministic.
    const int workers = std::max(1, std::min(worker_count(), half / 256));
    const int chunk = (half + workers - 1) / workers;
    std::vector<std::vector<double>> pos_part(workers), neg_part(workers);
    parallel_blocks(workers, [&](std::int64_t wi) {
      auto& pos = pos_part[static_cast<std::size_t>(wi)];
      auto& neg = neg_part[static_cast<std::size_t>(wi)];
      pos.assign(half + 2, 0.0);
      neg.assign(half + 2, 0.0);
      const int i_lo = 1 + static_cast<int>(wi) * chunk;
      const int i_hi = std::min(half, i_lo + chunk - 1);
      for (int i = i_lo; i <= i_hi; ++i) {
        const double ap = wa[half + i], an = wa[half - i];
        if (ap + an < kRowCut) continue;
        const std::uint32_t* row = table.row(i);
        for (int j = b_lo; j <= b_hi; ++j) {
          const double bp = wb[half + j], bn = wb[half - j];
          const double wpp = ap * bp + an * bn;
          const double wpn = ap * bn + an * bp;
          const std::uint32_t e = row[j];
          const int k = static_cast<int>(e & 0xffffu);
          const double f = static_cast<double>(e >> 16) * (1.0 / 65535.0);
          const double g = 1.0 - f;
          pos[k] += wpp * g;
          pos[k + 1] += wpp * f;
          neg[k] += wpn * g;
          neg[k + 1] += wpn * f;
        }
      }
    });
    for (int wi = 0; wi < workers; ++wi) {
      for (int k = 0; k <= half + 1; ++k) {
        out_pos[k] += pos_part[static_cast<std::size_t>(wi)][static_cast<std::size_t>(k)];
        out_neg[k] += neg_part[static_cast<std::size_t>(wi)][static_cast<std::size_t>(k)];
      }
    }
  }

  LlrDensity out(grid);
  auto& w = out.weights();
  w[half] = out_zero + out_pos[0] + out_neg[0];
  for (int i = 1; i <= half; ++i) {
    w[half + i] = out_pos[i];
    w[half - i] = out_neg[i];
  }
  // Mass split onto index half+1 from k=half (f==0 there) is empty; the
  // scratch rows have one spare slot so no bound check is needed above.
  out.mass_plus_inf() = out_pinf;
  out.mass_minus_inf() = out_minf;
  return out;
}

DensitySampler::DensitySampler(const LlrDensity& d) {
  const int n = d.grid().points();
  cdf_.reserve(n + 2);
  values_.reserve(n + 2);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    if (d.weights()[j] > 0.0) {
      acc += d.weights()[j];
      cdf_.push_back(acc);
      values_.push_back(d.grid().value_at(j));
    }
  }
  if (d.mass_minus_inf() > 0.0) {
    acc += d.mass_minus_inf();
    cdf_.push_back(acc);
    values_.push_back(-HUGE_VAL);
  }
  if (d.mass_plus_inf() > 0.0) {
    acc += d.mass_plus_inf();
    cdf_.push_back(acc);
    values_.push_back(HUGE_VAL);
  }
  if (cdf_.empty()) throw std::invalid_argument("cannot sample an empty density");
  // Normalize so draws work for unnormalized inputs too.
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

double DensitySampler::draw(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = static_cast<std::size_t>(it - cdf_.begin());
  return values_[std::min(idx, values_.size() - 1)];
}

}  // namespace bicm
