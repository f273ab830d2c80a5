#pragma once

#include <vector>

#include "mimolab/numerics.hpp"

namespace mimolab {

// One flat-fading realization. gains(i, m) is the complex gain from transmit
// antenna i (0-based) to receive antenna m.
struct ChannelBlock {
  int nt = 0;
  int nr = 0;
  CMat gains;  // nt x nr

  Complex h(int tx, int rx) const { return gains(tx, rx); }
};

/// i.i.d. CN(0,1) block, nt x nr.
ChannelBlock draw_flat_block(int nt, int nr, RngStream& rng);

/// One AR(1) step: rho*cur + sqrt(1-rho^2)*innovation, entrywise.
ChannelBlock ar1_step(const ChannelBlock& cur, double rho, const ChannelBlock& innovation);

// First-order autoregressive fading: h(k+1) = rho h(k) + sqrt(1-rho^2) g(k)
// with g i.i.d. CN(0,1). Marginals stay unit-variance for any rho in [0,1].
struct FadingProcess {
  ChannelBlock current;
  double rho = 1.0;
  RngStream rng;

  FadingProcess(ChannelBlock initial, double rho_, RngStream rng_);
};

/// Advances the process one step and returns the new block.
ChannelBlock evolve_ar1(FadingProcess& process);

// Tapped-delay-line power profile. Taps sit at multiples of the sample
// period with exponentially decaying power, truncated at 99.9% cumulative
// power and renormalized.
struct TdlProfile {
  std::vector<double> tap_delays_ns;  // strictly increasing, multiples of the sample period
  std::vector<double> tap_powers;     // sum to 1
  double rms_delay_spread_ns = 0.0;   // requested value
  double sample_period_ns = 0.0;
  double tx_correlation = 0.0;        // adjacent-antenna coefficient of the exponential R_tx
};

TdlProfile build_tdl_profile(double rms_delay_spread_ns, double sample_period_ns,
                             double tx_correlation);

/// RMS delay spread of an arbitrary (delays, powers) profile.
double computed_rms_delay_spread(const TdlProfile& profile);

// Frequency response of one TDL realization on the used OFDM tones.
struct ToneChannelSet {
  std::vector<int> tone_indices;     // signed, in [-nfft/2, nfft/2)
  std::vector<ChannelBlock> tones;   // one block per used tone, same order
  double tone_spacing_hz = 0.0;

  const ChannelBlock& at(size_t k) const { return tones[k]; }
};

// Draws i.i.d. CN(0, p_l) tap matrices, imposes transmit-side Kronecker
// correlation via R_tx^{1/2} (R_tx)_{ij} = c^|i-j|, and evaluates the DFT
// response at each used tone.
ToneChannelSet draw_tdl_tones(const TdlProfile& profile, int nt, int nr, int nfft,
                              const std::vector<int>& used_tones, double tone_spacing_hz,
                              RngStream& rng);

}  // namespace mimolab
