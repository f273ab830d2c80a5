#include "mimolab/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mimolab {

ChannelBlock draw_flat_block(int nt, int nr, RngStream& rng) {
  if (nt < 1 || nr < 1) {
    throw std::invalid_argument("draw_flat_block: dimensions must be >= 1");
  }
  return {nt, nr, complex_gaussian_matrix(nt, nr, rng)};
}

ChannelBlock ar1_step(const ChannelBlock& cur, double rho, const ChannelBlock& innovation) {
  ChannelBlock next = cur;
  double w = std::sqrt(1.0 - rho * rho);
  next.gains = rho * cur.gains + w * innovation.gains;
  return next;
}

FadingProcess::FadingProcess(ChannelBlock initial, double rho_, RngStream rng_)
    : current(std::move(initial)), rho(rho_), rng(std::move(rng_)) {
  if (rho < 0.0 || rho > 1.0) {
    throw std::invalid_argument("FadingProcess: rho must be in [0, 1]");
  }
}

ChannelBlock evolve_ar1(FadingProcess& process) {
  // Innovation is always drawn so that stream consumption does not depend
  // on rho; rho = 1 still yields an identical block.
  ChannelBlock g = draw_flat_block(process.current.nt, process.current.nr, process.rng);
  process.current = ar1_step(process.current, process.rho, g);
  return process.current;
}

TdlProfile build_tdl_profile(double rms_delay_spread_ns, double sample_period_ns,
                             double tx_correlation) {
  if (rms_delay_spread_ns < 0.0 || sample_period_ns <= 0.0) {
    throw std::invalid_argument("build_tdl_profile: negative delay spread or sample period");
  }
  if (tx_correlation < 0.0 || tx_correlation >= 1.0) {
    throw std::invalid_argument("build_tdl_profile: tx_correlation must be in [0, 1)");
  }

  TdlProfile p;
  p.rms_delay_spread_ns = rms_delay_spread_ns;
  p.sample_period_ns = sample_period_ns;
  p.tx_correlation = tx_correlation;

  if (rms_delay_spread_ns == 0.0) {
    p.tap_delays_ns = {0.0};
    p.tap_powers = {1.0};
    return p;
  }

  // p_l ~ exp(-l T / tau): geometric decay a = exp(-T/tau). Keep taps until
  // 1 - a^{L} >= 0.999 of the infinite-profile power, then renormalize.
  double a = std::exp(-sample_period_ns / rms_delay_spread_ns);
  int ntaps = static_cast<int>(std::ceil(std::log(1e-3) / std::log(a)));
  if (ntaps < 1) ntaps = 1;

  double total = 0.0;
  for (int l = 0; l < ntaps; ++l) {
    double w = std::pow(a, l);
    p.tap_delays_ns.push_back(l * sample_period_ns);
    p.tap_powers.push_back(w);
    total += w;
  }
  for (double& w : p.tap_powers) w /= total;
  return p;
}

double computed_rms_delay_spread(const TdlProfile& profile) {
  double mean = 0.0, sq = 0.0;
  for (size_t l = 0; l < profile.tap_powers.size(); ++l) {
    mean += profile.tap_powers[l] * profile.tap_delays_ns[l];
    sq += profile.tap_powers[l] * profile.tap_delays_ns[l] * profile.tap_delays_ns[l];
  }
  double var = sq - mean * mean;
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

namespace {

// Symmetric square root of the exponential correlation matrix c^|i-j|.
Eigen::MatrixXd tx_correlation_sqrt(int nt, double c) {
  Eigen::MatrixXd r(nt, nt);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      r(i, j) = std::pow(c, std::abs(i - j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

ToneChannelSet draw_tdl_tones(const TdlProfile& profile, int nt, int nr, int nfft,
                              const std::vector<int>& used_tones, double tone_spacing_hz,
                              RngStream& rng) {
  if (profile.tap_powers.empty() || profile.tap_powers.size() != profile.tap_delays_ns.size()) {
    throw std::invalid_argument("draw_tdl_tones: malformed profile");
  }
  for (int k : used_tones) {
    if (k < -nfft / 2 || k >= nfft / 2) {
      throw std::invalid_argument("draw_tdl_tones: tone index out of range");
    }
  }

  const size_t ntaps = profile.tap_powers.size();
  Eigen::MatrixXd rsqrt;
  if (profile.tx_correlation > 0.0 && nt > 1) rsqrt = tx_correlation_sqrt(nt, profile.tx_correlation);

  std::vector<CMat> taps(ntaps);
  for (size_t l = 0; l < ntaps; ++l) {
    CMat g = complex_gaussian_matrix(nt, nr, rng) * std::sqrt(profile.tap_powers[l]);
    taps[l] = rsqrt.size() ? CMat(rsqrt * g) : g;
  }

  ToneChannelSet set;
  set.tone_indices = used_tones;
  set.tone_spacing_hz = tone_spacing_hz;
  set.tones.reserve(used_tones.size());
  for (int k : used_tones) {
    CMat h = CMat::Zero(nt, nr);
    for (size_t l = 0; l < ntaps; ++l) {
      // Tap at integer sample offset n_l: phase ramp exp(-j 2 pi k n_l / nfft).
      double n_l = profile.tap_delays_ns[l] / profile.sample_period_ns;
      double ph = -2.0 * std::numbers::pi * k * n_l / nfft;
      h += taps[l] * Complex(std::cos(ph), std::sin(ph));
    }
    set.tones.push_back({nt, nr, std::move(h)});
  }
  return set;
}

}  // namespace mimolab
