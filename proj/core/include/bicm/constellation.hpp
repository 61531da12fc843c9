#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace bicm {

enum class Modulation { Qpsk, Qam16, Qam64 };

/// Parses "qpsk" / "16qam" / "64qam" (case-insensitive).
Modulation parse_modulation(const std::string& name);
const char* modulation_name(Modulation mod);

/// Unit-energy square QAM with per-axis binary-reflected Gray labels.
///
/// Bit order inside a label word: bits [0, M/2) address the in-phase axis,
/// bits [M/2, M) the quadrature axis, most significant (sign) bit of each
/// axis first. Bit value 0 marks the positive half of its axis, so a
/// positive LLR ln(P0/P1) points toward the transmitted bit under the
/// all-zero convention. Labels are read with bit_of().
struct Constellation {
  int bits_per_symbol = 0;                     // M
  std::vector<std::complex<double>> symbols;   // 2^M points, E|X|^2 = 1
  std::vector<std::uint32_t> labels;           // label word per symbol

  int size() const { return static_cast<int>(symbols.size()); }
  int bit_of(int symbol_index, int m) const {
    return static_cast<int>((labels[symbol_index] >> m) & 1u);
  }
};

struct BitPartition {
  int bit_index = 0;
  std::vector<int> zero_set;  // symbol indices with bit m = 0
  std::vector<int> one_set;
};

Constellation build_constellation(Modulation mod);

/// Splits symbol indices by label bit m. Throws std::out_of_range for bad m.
BitPartition bit_partition(const Constellation& c, int m);

}  // namespace bicm
