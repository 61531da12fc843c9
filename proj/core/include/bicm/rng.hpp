#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace bicm {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ stream. All randomness in the library flows from a single
/// master seed through child streams, so any run is reproducible from the
/// seed recorded in its output.
///
/// Draw-count contract: uniform() consumes one 64-bit word, normal_pair()
/// exactly two. Samplers built on top consume a fixed number of words per
/// sample, which keeps common-random-number comparisons across channel
/// parameters aligned.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  /// Independent child stream; `tag` distinguishes siblings.
  Rng child(std::uint64_t tag) const {
    std::uint64_t sm = state_[0] ^ (0xd1342543de82ef95ULL * (tag + 1));
    return Rng(splitmix64(sm) ^ state_[2]);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on (0,1]; never returns 0 so log() is safe.
  double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform on [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    // 128-bit multiply keeps the modulo bias below 2^-64.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Two independent N(0,1) draws (Box-Muller, trigonometric form: fixed
  /// two-word consumption, no rejection loop).
  void normal_pair(double& z0, double& z1) {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
  }

  /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_normal() {
    double z0, z1;
    normal_pair(z0, z1);
    return {z0 * 0.7071067811865475244, z1 * 0.7071067811865475244};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace bicm
