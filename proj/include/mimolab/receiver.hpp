#pragma once

#include <vector>

#include "mimolab/codecs.hpp"

namespace mimolab {

// Raw received samples of one codeword: samples(m, t) at receive antenna m,
// time instant t. Stacking/conjugation for detection follows the effective
// channel's conj_instant pattern.
struct ReceivedBlock {
  CMat samples;  // nr x instants
  double sigma2 = 0.0;
};

// r_{m,t} = scale * sum_i h_im(t) s_{i,t} + n_{m,t}, n i.i.d. CN(0, sigma2).
// blocks holds either one ChannelBlock (static over the codeword) or one per
// instant. scale defaults to 1/sqrt(antennas) (per-antenna STBC power
// normalization); beamforming-style unit-total-power codewords pass 1.0.
ReceivedBlock simulate_reception(const Codeword& codeword,
                                 const std::vector<ChannelBlock>& blocks, double sigma2,
                                 RngStream& rng, double scale = -1.0);

struct DetectionResult {
  CVec estimates;            // matched filter: H^H r (gain Sigma/nt); MMSE: unbiased
  Eigen::VectorXd post_sinr; // per symbol, linear
  double diag_gain = 0.0;    // Sigma/nt
};

// z = H^H r. For an orthogonal effective channel the estimates are
// (Sigma/nt) x + colored noise and the post SINR is Sigma/(nt sigma2).
// The detector sees only the effective channel, like a legacy Alamouti
// decoder; it cannot tell whether the feedback angle matched the transmitter.
DetectionResult matched_filter_detect(const ReceivedBlock& received,
                                      const EffectiveChannel& eff);

// Unbiased MMSE estimates with per-symbol SINR; coincides with the matched
// filter when the effective channel is orthogonal.
DetectionResult mmse_detect(const ReceivedBlock& received, const EffectiveChannel& eff,
                            double sigma2);

}  // namespace mimolab
