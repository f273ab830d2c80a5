#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mimolab/numerics.hpp"

namespace mimolab {

// Gray-mapped square QAM with unit average symbol energy. Per axis the MSB
// selects the half-plane (0 -> positive) and levels follow the Gray sequence
// 00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3 (scaled). 4-QAM: 0 -> +1, 1 -> -1.
struct ConstellationSpec {
  int order = 4;       // 4 or 16
  double scale = 0.0;  // 1/sqrt(2) or 1/sqrt(10)

  int bits_per_symbol() const { return order == 4 ? 2 : 4; }
  static ConstellationSpec qam(int order);
};

/// Constellation point for a bits_per_symbol-wide label (I bits first, MSB first).
Complex qam_point(uint32_t label, const ConstellationSpec& spec);

/// Maps a bit stream (bit count divisible by bits_per_symbol) to symbols.
std::vector<Complex> qam_map(const std::vector<uint8_t>& bits, const ConstellationSpec& spec);

/// Nearest-point label (exact slicer for square QAM).
uint32_t qam_hard(Complex y, const ConstellationSpec& spec);

// Max-log LLR per bit, scaled by the post-detection SINR of the (unbiased)
// equalized symbol: llr_b = sinr * (d1^2 - d0^2) with d0/d1 the distance to
// the nearest 0-/1-labeled point. Positive llr favors bit 0.
void qam_llr(Complex y, double post_sinr, const ConstellationSpec& spec, double* out);

enum class CodeRate { kHalf, kThreeQuarters };

// K = 7 feed-forward convolutional code, generators 133/171 (octal), with
// the [1,1,1,0,0,1] puncturing pattern for rate 3/4. Six zero tail bits are
// appended by the encoder and stripped by the decoder.
struct CodeSpec {
  int constraint_length = 7;
  uint32_t g1 = 0133;
  uint32_t g2 = 0171;
  CodeRate rate = CodeRate::kHalf;
};

std::vector<uint8_t> conv_encode(const std::vector<uint8_t>& bits, const CodeSpec& spec);

/// Soft Viterbi over the whole block. llrs use the qam_llr sign convention.
std::vector<uint8_t> viterbi_decode(const std::vector<double>& llrs, const CodeSpec& spec);

/// Punctured length for a message length (both in bits), including the tail.
size_t coded_length(size_t message_bits, const CodeSpec& spec);

/// Message length whose punctured output is exactly `punctured_bits`; throws on framing mismatch.
size_t message_length_for(size_t punctured_bits, const CodeSpec& spec);

// Block interleaver: input fills an rows x cols block column by column and
// is read out row by row, so rows = coded-bits-per-tone spreads adjacent
// bits across distant tones. deinterleave is the exact inverse.
template <typename T>
std::vector<T> interleave(const std::vector<T>& in, int rows, int cols) {
  if (rows < 1 || cols < 1 || in.size() != static_cast<size_t>(rows) * cols) {
    throw std::invalid_argument("interleave: size must equal rows*cols");
  }
  std::vector<T> out(in.size());
  for (size_t i = 0; i < in.size(); ++i) {
    out[(i % rows) * cols + i / rows] = in[i];
  }
  return out;
}

template <typename T>
std::vector<T> deinterleave(const std::vector<T>& in, int rows, int cols) {
  if (rows < 1 || cols < 1 || in.size() != static_cast<size_t>(rows) * cols) {
    throw std::invalid_argument("deinterleave: size must equal rows*cols");
  }
  std::vector<T> out(in.size());
  for (size_t i = 0; i < in.size(); ++i) {
    out[i] = in[(i % rows) * cols + i / rows];
  }
  return out;
}

}  // namespace mimolab
