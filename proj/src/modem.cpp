#include "mimolab/modem.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

namespace mimolab {
namespace {

// Per-axis Gray levels indexed by the axis label: 00,01,11,10 -> +3,+1,-1,-3.
constexpr std::array<double, 4> kLevels16 = {3.0, 1.0, -1.0, -3.0};
constexpr std::array<uint32_t, 4> kLabelToPos16 = {0, 1, 3, 2};  // label -> level rank

double axis_level(uint32_t axis_label, int order) {
  if (order == 4) return axis_label ? -1.0 : 1.0;
  return kLevels16[kLabelToPos16[axis_label]];
}

uint32_t axis_slice(double v, int order) {
  if (order == 4) return v < 0.0 ? 1u : 0u;
  // Thresholds at -2, 0, +2 (unscaled); ranks map back through the Gray table.
  int rank = v >= 0.0 ? (v >= 2.0 ? 0 : 1) : (v >= -2.0 ? 2 : 3);
  constexpr std::array<uint32_t, 4> pos_to_label = {0, 1, 3, 2};
  return pos_to_label[rank];
}

const uint8_t kPuncture34[6] = {1, 1, 1, 0, 0, 1};

uint32_t parity(uint32_t v) { return std::popcount(v) & 1u; }

}  // namespace

ConstellationSpec ConstellationSpec::qam(int order) {
  if (order != 4 && order != 16) {
    throw std::invalid_argument("ConstellationSpec: order must be 4 or 16");
  }
  return {order, order == 4 ? 1.0 / std::sqrt(2.0) : 1.0 / std::sqrt(10.0)};
}

Complex qam_point(uint32_t label, const ConstellationSpec& spec) {
  int axis_bits = spec.bits_per_symbol() / 2;
  uint32_t mask = (1u << axis_bits) - 1;
  uint32_t i_label = (label >> axis_bits) & mask;
  uint32_t q_label = label & mask;
  return {spec.scale * axis_level(i_label, spec.order),
          spec.scale * axis_level(q_label, spec.order)};
}

std::vector<Complex> qam_map(const std::vector<uint8_t>& bits, const ConstellationSpec& spec) {
  int bps = spec.bits_per_symbol();
  if (bits.size() % bps != 0) {
    throw std::invalid_argument("qam_map: bit count not divisible by bits per symbol");
  }
  std::vector<Complex> out;
  out.reserve(bits.size() / bps);
  for (size_t k = 0; k < bits.size(); k += bps) {
    uint32_t label = 0;
    for (int b = 0; b < bps; ++b) label = (label << 1) | (bits[k + b] & 1u);
    out.push_back(qam_point(label, spec));
  }
  return out;
}

uint32_t qam_hard(Complex y, const ConstellationSpec& spec) {
  int axis_bits = spec.bits_per_symbol() / 2;
  uint32_t i_label = axis_slice(y.real() / spec.scale, spec.order);
  uint32_t q_label = axis_slice(y.imag() / spec.scale, spec.order);
  return (i_label << axis_bits) | q_label;
}

void qam_llr(Complex y, double post_sinr, const ConstellationSpec& spec, double* out) {
  int bps = spec.bits_per_symbol();
  double d0[4], d1[4];
  for (int b = 0; b < bps; ++b) {
    d0[b] = std::numeric_limits<double>::infinity();
    d1[b] = std::numeric_limits<double>::infinity();
  }
  for (uint32_t label = 0; label < static_cast<uint32_t>(spec.order); ++label) {
    double d = std::norm(y - qam_point(label, spec));
    for (int b = 0; b < bps; ++b) {
      bool one = (label >> (bps - 1 - b)) & 1u;
      double& slot = one ? d1[b] : d0[b];
      if (d < slot) slot = d;
    }
  }
  for (int b = 0; b < bps; ++b) out[b] = post_sinr * (d1[b] - d0[b]);
}

std::vector<uint8_t> conv_encode(const std::vector<uint8_t>& bits, const CodeSpec& spec) {
  const int mem = spec.constraint_length - 1;
  std::vector<uint8_t> coded;
  coded.reserve(2 * (bits.size() + mem));
  uint32_t reg = 0;
  auto push = [&](uint8_t b) {
    uint32_t w = (static_cast<uint32_t>(b & 1u) << mem) | reg;
    coded.push_back(static_cast<uint8_t>(parity(w & spec.g1)));
    coded.push_back(static_cast<uint8_t>(parity(w & spec.g2)));
    reg = w >> 1;
  };
  for (uint8_t b : bits) push(b);
  for (int i = 0; i < mem; ++i) push(0);  // flush to the zero state

  if (spec.rate == CodeRate::kHalf) return coded;
  std::vector<uint8_t> punctured;
  punctured.reserve(coded.size() * 2 / 3);
  for (size_t i = 0; i < coded.size(); ++i) {
    if (kPuncture34[i % 6]) punctured.push_back(coded[i]);
  }
  return punctured;
}

size_t coded_length(size_t message_bits, const CodeSpec& spec) {
  size_t full = 2 * (message_bits + spec.constraint_length - 1);
  if (spec.rate == CodeRate::kHalf) return full;
  size_t kept = (full / 6) * 4;
  switch (full % 6) {  // partial pattern group
    case 0: break;
    case 1: kept += 1; break;
    case 2: kept += 2; break;
    case 3: kept += 3; break;
    case 4: kept += 3; break;
    case 5: kept += 3; break;
  }
  return kept;
}

size_t message_length_for(size_t punctured_bits, const CodeSpec& spec) {
  size_t full;
  if (spec.rate == CodeRate::kHalf) {
    full = punctured_bits;
  } else {
    if (punctured_bits % 4 != 0) {
      throw std::invalid_argument("message_length_for: rate-3/4 length must be a multiple of 4");
    }
    full = punctured_bits / 4 * 6;
  }
  if (full % 2 != 0 || full / 2 < static_cast<size_t>(spec.constraint_length - 1)) {
    throw std::invalid_argument("message_length_for: coded length inconsistent with the code");
  }
  return full / 2 - (spec.constraint_length - 1);
}

std::vector<uint8_t> viterbi_decode(const std::vector<double>& llrs, const CodeSpec& spec) {
  // Depuncture: zero LLR carries no information.
  std::vector<double> soft;
  if (spec.rate == CodeRate::kHalf) {
    soft = llrs;
  } else {
    if (llrs.size() % 4 != 0) {
      throw std::invalid_argument("viterbi_decode: rate-3/4 input must be a multiple of 4");
    }
    soft.reserve(llrs.size() / 4 * 6);
    size_t k = 0;
    while (k < llrs.size()) {
      for (int p = 0; p < 6; ++p) {
        soft.push_back(kPuncture34[p] ? llrs[k++] : 0.0);
      }
    }
  }
  if (soft.size() % 2 != 0) {
    throw std::invalid_argument("viterbi_decode: odd coded length");
  }
  const size_t steps = soft.size() / 2;
  const int mem = spec.constraint_length - 1;
  if (steps < static_cast<size_t>(mem)) {
    throw std::invalid_argument("viterbi_decode: block shorter than the tail");
  }
  const int nstates = 1 << mem;

  // Branch outputs per (input, state).
  std::vector<std::array<uint8_t, 2>> out0(nstates), out1(nstates);
  for (int s = 0; s < nstates; ++s) {
    uint32_t w0 = static_cast<uint32_t>(s);
    uint32_t w1 = (1u << mem) | s;
    out0[s] = {static_cast<uint8_t>(parity(w0 & spec.g1)), static_cast<uint8_t>(parity(w0 & spec.g2))};
    out1[s] = {static_cast<uint8_t>(parity(w1 & spec.g1)), static_cast<uint8_t>(parity(w1 & spec.g2))};
  }

  constexpr double kNeg = -1e300;
  std::vector<double> score(nstates, kNeg), next(nstates, kNeg);
  score[0] = 0.0;
  std::vector<uint8_t> decisions(steps * nstates);

  for (size_t t = 0; t < steps; ++t) {
    // Positive LLR favors bit 0: metric adds +llr for a 0 branch bit.
    double l0 = soft[2 * t], l1 = soft[2 * t + 1];
    std::fill(next.begin(), next.end(), kNeg);
    uint8_t* dec = &decisions[t * nstates];
    for (int s = 0; s < nstates; ++s) {
      if (score[s] == kNeg) continue;
      for (int b = 0; b < 2; ++b) {
        const auto& ob = b ? out1[s] : out0[s];
        double m = score[s] + (ob[0] ? -l0 : l0) + (ob[1] ? -l1 : l1);
        uint32_t w = (static_cast<uint32_t>(b) << mem) | static_cast<uint32_t>(s);
        int ns = static_cast<int>(w >> 1);
        if (m > next[ns]) {
          next[ns] = m;
          dec[ns] = static_cast<uint8_t>((b << 1) | (s & 1));  // input bit + dropped bit
        }
      }
    }
    score.swap(next);
  }

  // Tail bits force state 0.
  std::vector<uint8_t> bits(steps);
  int state = 0;
  for (size_t t = steps; t-- > 0;) {
    uint8_t d = decisions[t * nstates + state];
    int input = (d >> 1) & 1;
    bits[t] = static_cast<uint8_t>(input);
    state = ((state << 1) | (d & 1)) & (nstates - 1);
  }
  bits.resize(steps - mem);
  return bits;
}

}  // namespace mimolab
