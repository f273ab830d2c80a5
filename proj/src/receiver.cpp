#include "mimolab/receiver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mimolab {
namespace {

// Stacks receive samples per the effective channel's conjugation pattern:
// (r_{m,k}, r_{m,k+1}^*) for the Alamouti family, (r1, r2^*, r3^*, r4) for
// the QO-STBC family.
CVec stack_received(const ReceivedBlock& received, const EffectiveChannel& eff) {
  const int t = eff.instants();
  const int nr = static_cast<int>(received.samples.rows());
  if (received.samples.cols() != t || static_cast<int>(eff.per_rx.size()) != nr) {
    throw std::invalid_argument("detect: received block and effective channel disagree");
  }
  CVec z(nr * t);
  for (int m = 0; m < nr; ++m) {
    for (int k = 0; k < t; ++k) {
      Complex v = received.samples(m, k);
      z(m * t + k) = eff.conj_instant[k] ? std::conj(v) : v;
    }
  }
  return z;
}

}  // namespace

ReceivedBlock simulate_reception(const Codeword& codeword,
                                 const std::vector<ChannelBlock>& blocks, double sigma2,
                                 RngStream& rng, double scale) {
  const int nt = static_cast<int>(codeword.rows());
  const int instants = static_cast<int>(codeword.cols());
  if (blocks.empty() || (blocks.size() != 1 && blocks.size() != static_cast<size_t>(instants))) {
    throw std::invalid_argument("simulate_reception: need one block or one per instant");
  }
  for (const ChannelBlock& b : blocks) {
    if (b.nt < nt) throw std::invalid_argument("simulate_reception: channel has too few antennas");
  }
  if (!(sigma2 >= 0.0)) {
    throw std::invalid_argument("simulate_reception: sigma2 must be >= 0");
  }
  if (scale < 0.0) scale = 1.0 / std::sqrt(static_cast<double>(nt));

  const int nr = blocks[0].nr;
  ReceivedBlock out;
  out.sigma2 = sigma2;
  out.samples.resize(nr, instants);
  const double nstd = std::sqrt(sigma2);
  for (int t = 0; t < instants; ++t) {
    const ChannelBlock& b = blocks[blocks.size() == 1 ? 0 : t];
    for (int m = 0; m < nr; ++m) {
      Complex r = 0.0;
      for (int i = 0; i < nt; ++i) r += b.h(i, m) * codeword(i, t);
      out.samples(m, t) = scale * r + nstd * rng.cgaussian();
    }
  }
  return out;
}

DetectionResult matched_filter_detect(const ReceivedBlock& received,
                                      const EffectiveChannel& eff) {
  CVec z = stack_received(received, eff);
  CMat h = eff.stacked();
  DetectionResult res;
  res.estimates = h.adjoint() * z;
  res.diag_gain = eff.diag_gain();
  double sinr = received.sigma2 > 0.0 ? res.diag_gain / received.sigma2
                                      : std::numeric_limits<double>::infinity();
  res.post_sinr = Eigen::VectorXd::Constant(eff.symbols(), sinr);
  return res;
}

DetectionResult mmse_detect(const ReceivedBlock& received, const EffectiveChannel& eff,
                            double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("mmse_detect: sigma2 must be > 0");
  }
  CVec z = stack_received(received, eff);
  CMat h = eff.stacked();
  const Eigen::Index s = h.cols();

  CMat gram = h.adjoint() * h;
  CMat w = (gram + sigma2 * CMat::Identity(s, s)).inverse() * h.adjoint();
  CVec est = w * z;
  // Unbias: divide each estimate by the corresponding diagonal of W H.
  CMat wh = w * h;
  for (Eigen::Index i = 0; i < s; ++i) {
    Complex d = wh(i, i);
    if (std::abs(d) > 0.0) est(i) /= d;
  }

  DetectionResult res;
  res.estimates = est;
  res.post_sinr = mmse_sinr(h, sigma2);
  res.diag_gain = eff.diag_gain();
  return res;
}

}  // namespace mimolab
