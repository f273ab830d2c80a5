#pragma once

#include "mimolab/channel.hpp"

namespace mimolab {

enum class FeedbackBits {
  kOne,       // codebook {0, pi}
  kTwo,       // codebook {0, pi/2, pi, 3pi/2}
  kInfinite,  // full-resolution angle
};

struct FeedbackWord {
  double theta = 0.0;                       // radians in [0, 2pi)
  FeedbackBits bits = FeedbackBits::kInfinite;
  int index = -1;                           // codebook index; -1 for infinite resolution
};

// alpha = sum_m (h1m^* h3m + h2m^* h4m); the h4 term is absent for nt = 3.
// Its phase is the quantity fed back to the transmitter.
Complex compute_alpha(const ChannelBlock& block, int nt);

/// theta = angle(alpha) wrapped to [0, 2pi); alpha = 0 returns 0.
double optimal_theta(Complex alpha);

// Effective channel power of the phase-aligned scheme:
// Sigma = sum_im |h_im|^2 + 2 Re{e^{-j theta} alpha}.
double sigma_gain(const ChannelBlock& block, double theta, int nt);

// Codebook angle maximizing Re{e^{-j theta_q} alpha}; ties break toward the
// smaller index. Infinite resolution returns angle(alpha) exactly.
FeedbackWord quantize_theta(Complex alpha, FeedbackBits bits);

/// Codebook for a resolution ({0, pi} or {0, pi/2, pi, 3pi/2}); empty for infinite.
std::vector<double> feedback_codebook(FeedbackBits bits);

}  // namespace mimolab
