#include "bicm/constellation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace bicm {

Modulation parse_modulation(const std::string& name) {
  std::string s;
  s.reserve(name.size());
  for (char ch : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (s == "qpsk" || s == "4qam") return Modulation::Qpsk;
  if (s == "16qam") return Modulation::Qam16;
  if (s == "64qam") return Modulation::Qam64;
  throw std::invalid_argument("unsupported modulation: " + name + " (use qpsk, 16qam, 64qam)");
}

const char* modulation_name(Modulation mod) {
  switch (mod) {
    case Modulation::Qpsk: return "qpsk";
    case Modulation::Qam16: return "16qam";
    case Modulation::Qam64: return "64qam";
  }
  return "?";
}

namespace {

// Gray word for the level at index `j` (levels sorted ascending), chosen so
// that the most significant bit is 0 on the positive half of the axis and
// adjacent levels differ in exactly one bit.
std::uint32_t axis_gray(int j, int levels) {
  const std::uint32_t r = static_cast<std::uint32_t>(levels - 1 - j);
  return r ^ (r >> 1);
}

}  // namespace

Constellation build_constellation(Modulation mod) {
  int m_bits;
  switch (mod) {
    case Modulation::Qpsk: m_bits = 2; break;
    case Modulation::Qam16: m_bits = 4; break;
    case Modulation::Qam64: m_bits = 6; break;
    default: throw std::invalid_argument("unsupported modulation");
  }
  const int half = m_bits / 2;       // bits per axis
  const int levels = 1 << half;      // amplitude levels per axis

  // Levels -(levels-1), ..., -1, +1, ..., +(levels-1); per-axis mean square
  // is (levels^2 - 1)/3, and the two axes add.
  double energy = 2.0 * (static_cast<double>(levels) * levels - 1.0) / 3.0;
  const double scale = 1.0 / std::sqrt(energy);

  Constellation c;
  c.bits_per_symbol = m_bits;
  c.symbols.reserve(1u << m_bits);
  c.labels.reserve(1u << m_bits);
  for (int ji = 0; ji < levels; ++ji) {
    const double re = (2 * ji - (levels - 1)) * scale;
    const std::uint32_t gi = axis_gray(ji, levels);
    for (int jq = 0; jq < levels; ++jq) {
      const double im = (2 * jq - (levels - 1)) * scale;
      const std::uint32_t gq = axis_gray(jq, levels);
      // Axis word g has its sign bit at position half-1; label bit k of the
      // I axis is bit (half-1-k) of gi, Q-axis bits follow at offset half.
      std::uint32_t label = 0;
      for (int k = 0; k < half; ++k) {
        label |= ((gi >> (half - 1 - k)) & 1u) << k;
        label |= ((gq >> (half - 1 - k)) & 1u) << (half + k);
      }
      c.symbols.emplace_back(re, im);
      c.labels.push_back(label);
    }
  }
  return c;
}

BitPartition bit_partition(const Constellation& c, int m) {
  if (m < 0 || m >= c.bits_per_symbol)
    throw std::out_of_range("bit index out of range");
  BitPartition p;
  p.bit_index = m;
  for (int i = 0; i < c.size(); ++i) {
    (c.bit_of(i, m) == 0 ? p.zero_set : p.one_set).push_back(i);
  }
  return p;
}

}  // namespace bicm
