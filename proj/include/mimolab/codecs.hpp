#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mimolab/channel.hpp"
#include "mimolab/feedback.hpp"

namespace mimolab {

// Transmit codeword: rows = antennas, columns = time instants.
// (2,2) for Alamouti, (nt,2) after spatial expansion, (4,4) for QO-STBC.
using Codeword = CMat;

struct SymbolPair {
  Complex first;
  Complex second;
};

// Alamouti codeword [[x_k, x_{k+1}^*], [x_{k+1}, -x_k^*]].
Codeword alamouti_encode(const SymbolPair& pair);

// Spatial mapping Q (nt x 2) spreading an Alamouti codeword over nt
// antennas. Nonzero entries have unit magnitude; the 1/sqrt(nt) power factor
// lives in the effective channel, not in Q. nt = 4 rows:
//   [1,0],[0,1],[e^{-j t},0],[0,e^{-j t}]; nt = 3 drops the last row;
// nt = 2 is the identity. Even nt > 4 takes nt/2 - 1 angles.
CMat build_q(int nt, const std::vector<double>& thetas);

/// S' = Q * S.
Codeword spatial_expand(const Codeword& s, const CMat& q);

// Per-receive-antenna equivalent channel of a 2-symbol (or 4-symbol)
// codeword. Row t of each block is the linear model of the t-th stacked
// receive sample; conj_instant[t] marks samples entering conjugated.
struct EffectiveChannel {
  std::vector<CMat> per_rx;        // one SxS-ish block per receive antenna (rows = instants)
  std::vector<bool> conj_instant;  // stacking pattern, size = instants
  int nt = 0;                      // power normalization antennas

  int symbols() const { return per_rx.empty() ? 0 : static_cast<int>(per_rx[0].cols()); }
  int instants() const { return per_rx.empty() ? 0 : static_cast<int>(per_rx[0].rows()); }

  /// All per-antenna blocks stacked vertically (instants*nr x symbols).
  CMat stacked() const;

  /// sum_m H_m^H H_m.
  CMat gram() const;

  /// First diagonal entry of the Gram matrix (= Sigma/nt for aligned schemes).
  double diag_gain() const;
};

// Eq.-(5)-style effective channel of the phase-aligned expansion:
//   H_m = 1/sqrt(nt) [[h1m + e^{-jt} h3m,   h2m + e^{-jt} h4m],
//                     [-(h2m + e^{-jt} h4m)^*, (h1m + e^{-jt} h3m)^*]]
// with the h4 terms absent for nt = 3 and h3,h4 absent for nt = 2.
// Row 1 uses block_k, row 2 uses block_k1, so the model stays exactly
// linear when the channel moves inside the codeword.
EffectiveChannel effective_alamouti_channel(const ChannelBlock& block_k,
                                            const ChannelBlock& block_k1, double theta, int nt);

/// Time-invariant overload (block used for both instants).
EffectiveChannel effective_alamouti_channel(const ChannelBlock& block, double theta, int nt);

// Quasi-orthogonal 4x4 codeword (pairwise-Alamouti construction). Its
// effective Gram matrix is ||h||^2 I plus an anti-diagonal coupling of
// symbol pairs (1,4) and (2,3) with beta = 2 Re{h1 h4^* - h2 h3^*}.
Codeword qostbc_encode(const std::array<Complex, 4>& symbols);

// Effective 4x4 (per receive antenna) channel of the QO-STBC codeword with
// antennas 3,4 rotated by e^{-j phi}; one ChannelBlock per time instant.
EffectiveChannel effective_qostbc_channel(const std::array<ChannelBlock, 4>& blocks, double phi);

/// Time-invariant overload.
EffectiveChannel effective_qostbc_channel(const ChannelBlock& block, double phi);

// Interference term of the QO-STBC Gram matrix, gamma = sum_m (h1m h4m^* - h2m h3m^*);
// beta = 2 Re{e^{j phi} gamma} after rotating antennas 3,4 by e^{-j phi}.
Complex qostbc_interference(const ChannelBlock& block);

// Feedback phase that nulls the QO-STBC interference: phi = pi/2 - angle(gamma)
// (0 when gamma = 0), so Re{e^{j phi} gamma} = 0 and the code turns orthogonal
// with diagonal gain ||h||^2.
double ostbc_nulling_phase(const ChannelBlock& block);

/// Orthogonal-STBC effective gain with full channel knowledge: sum |h_im|^2 / nt.
double ostbc_bound_gain(const ChannelBlock& block, int nt);

/// Frequency-domain phasor of a cyclic time shift: e^{-j 2 pi f shift}.
Complex csd_phase(double tone_freq_hz, double shift_ns);

// Active antenna pair of frequency-switched transmit diversity. Tones and
// antennas are 1-based: tone 1 -> (1,2), tone 2 -> (1,3), tone 3 -> (1,4),
// then the cycle repeats; nt = 3 cycles [(1,2),(1,3)].
std::pair<int, int> fstd_pair(int tone_index, int nt);

enum class SchemeKind {
  kSiso,
  kAlamouti2x1,
  kPhaseAligned,     // nt in {3,4}, quantized or full-resolution feedback
  kSpatialMapFixed,  // expansion with theta = 0, no feedback
  kOstbcNulled,      // QO-STBC + interference-nulling phase feedback
  kQoStbc,
  kBeamforming,
  kCsd,
  kFstd,
  kOstbcBound,       // analytic orthogonal-STBC reference, gain ||h||^2/nt
};

struct SchemeId {
  SchemeKind kind = SchemeKind::kSiso;
  int nt = 4;                                    // PhaseAligned / SpatialMapFixed only
  FeedbackBits bits = FeedbackBits::kInfinite;   // PhaseAligned only

  std::string name() const;
  bool operator==(const SchemeId&) const = default;

  /// Parses names like "phase_aligned_4tx_2bit"; throws listing valid names.
  static SchemeId parse(const std::string& name);
  static std::vector<std::string> valid_names();
};

}  // namespace mimolab
