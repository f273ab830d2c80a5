#include "mimolab/codecs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mimolab {
namespace {

Complex expi(double a) { return {std::cos(a), std::sin(a)}; }

}  // namespace

Codeword alamouti_encode(const SymbolPair& pair) {
  Codeword s(2, 2);
  s(0, 0) = pair.first;
  s(0, 1) = std::conj(pair.second);
  s(1, 0) = pair.second;
  s(1, 1) = -std::conj(pair.first);
  return s;
}

CMat build_q(int nt, const std::vector<double>& thetas) {
  if (nt < 2 || (nt > 4 && nt % 2 != 0)) {
    throw std::invalid_argument("build_q: nt must be 2, 3, 4 or even");
  }
  size_t want = static_cast<size_t>((nt + 1) / 2) - 1;
  if (thetas.size() != want) {
    throw std::invalid_argument("build_q: expected " + std::to_string(want) + " angle(s)");
  }
  CMat q = CMat::Zero(nt, 2);
  q(0, 0) = 1.0;
  q(1, 1) = 1.0;
  for (int i = 2; i < nt; ++i) {
    // Antenna pair p >= 1 repeats the base pair rotated by e^{-j theta_p}.
    int p = i / 2 - 1;
    q(i, i % 2) = expi(-thetas[p]);
  }
  return q;
}

Codeword spatial_expand(const Codeword& s, const CMat& q) {
  if (s.rows() != 2 || s.cols() != 2 || q.cols() != 2) {
    throw std::invalid_argument("spatial_expand: want a 2x2 codeword and an nt x 2 mapping");
  }
  return q * s;
}

CMat EffectiveChannel::stacked() const {
  const int t = instants();
  const int s = symbols();
  CMat all(t * static_cast<int>(per_rx.size()), s);
  for (size_t m = 0; m < per_rx.size(); ++m) {
    all.block(static_cast<int>(m) * t, 0, t, s) = per_rx[m];
  }
  return all;
}

CMat EffectiveChannel::gram() const {
  const int s = symbols();
  CMat g = CMat::Zero(s, s);
  for (const CMat& h : per_rx) g += h.adjoint() * h;
  return g;
}

double EffectiveChannel::diag_gain() const {
  return std::real(gram()(0, 0));
}

EffectiveChannel effective_alamouti_channel(const ChannelBlock& block_k,
                                            const ChannelBlock& block_k1, double theta, int nt) {
  if (nt != 2 && nt != 3 && nt != 4) {
    throw std::invalid_argument("effective_alamouti_channel: nt must be 2, 3 or 4");
  }
  if (block_k.nt < nt || block_k1.nt < nt || block_k.nr != block_k1.nr) {
    throw std::invalid_argument("effective_alamouti_channel: inconsistent blocks");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(nt));
  const Complex rot = expi(-theta);

  EffectiveChannel eff;
  eff.nt = nt;
  eff.conj_instant = {false, true};
  eff.per_rx.reserve(block_k.nr);
  for (int m = 0; m < block_k.nr; ++m) {
    auto combined = [&](const ChannelBlock& b, int base) -> Complex {
      Complex v = b.h(base, m);
      if (base + 2 < nt) v += rot * b.h(base + 2, m);
      return v;
    };
    Complex a0 = combined(block_k, 0);   // h1 + e^{-jt} h3 at instant k
    Complex b0 = combined(block_k, 1);   // h2 + e^{-jt} h4 at instant k
    Complex a1 = combined(block_k1, 0);  // same sums at instant k+1
    Complex b1 = combined(block_k1, 1);
    CMat h(2, 2);
    h(0, 0) = a0;
    h(0, 1) = b0;
    h(1, 0) = -std::conj(b1);
    h(1, 1) = std::conj(a1);
    eff.per_rx.push_back(h * scale);
  }
  return eff;
}

EffectiveChannel effective_alamouti_channel(const ChannelBlock& block, double theta, int nt) {
  return effective_alamouti_channel(block, block, theta, nt);
}

Codeword qostbc_encode(const std::array<Complex, 4>& x) {
  // Pairwise-Alamouti quasi-orthogonal construction; rows = antennas,
  // columns = time instants.
  Codeword s(4, 4);
  s(0, 0) = x[0];  s(0, 1) = -std::conj(x[1]); s(0, 2) = -std::conj(x[2]); s(0, 3) = x[3];
  s(1, 0) = x[1];  s(1, 1) = std::conj(x[0]);  s(1, 2) = -std::conj(x[3]); s(1, 3) = -x[2];
  s(2, 0) = x[2];  s(2, 1) = -std::conj(x[3]); s(2, 2) = std::conj(x[0]);  s(2, 3) = -x[1];
  s(3, 0) = x[3];  s(3, 1) = std::conj(x[2]);  s(3, 2) = std::conj(x[1]);  s(3, 3) = x[0];
  return s;
}

EffectiveChannel effective_qostbc_channel(const std::array<ChannelBlock, 4>& blocks, double phi) {
  const int nr = blocks[0].nr;
  for (const ChannelBlock& b : blocks) {
    if (b.nt < 4 || b.nr != nr) {
      throw std::invalid_argument("effective_qostbc_channel: want four 4-antenna blocks");
    }
  }
  const double scale = 0.5;  // 1/sqrt(4)
  const Complex rot = expi(-phi);

  // Stacked receive samples are (r1, r2^*, r3^*, r4); block row t is built
  // from the channel at instant t so the model stays linear under
  // intra-codeword fading.
  EffectiveChannel eff;
  eff.nt = 4;
  eff.conj_instant = {false, true, true, false};
  eff.per_rx.reserve(nr);
  for (int m = 0; m < nr; ++m) {
    auto h = [&](int instant, int ant) -> Complex {
      Complex v = blocks[instant].h(ant, m);
      return ant >= 2 ? rot * v : v;
    };
    CMat e(4, 4);
    e(0, 0) = h(0, 0);
    e(0, 1) = h(0, 1);
    e(0, 2) = h(0, 2);
    e(0, 3) = h(0, 3);
    e(1, 0) = std::conj(h(1, 1));
    e(1, 1) = -std::conj(h(1, 0));
    e(1, 2) = std::conj(h(1, 3));
    e(1, 3) = -std::conj(h(1, 2));
    e(2, 0) = std::conj(h(2, 2));
    e(2, 1) = std::conj(h(2, 3));
    e(2, 2) = -std::conj(h(2, 0));
    e(2, 3) = -std::conj(h(2, 1));
    e(3, 0) = h(3, 3);
    e(3, 1) = -h(3, 2);
    e(3, 2) = -h(3, 1);
    e(3, 3) = h(3, 0);
    eff.per_rx.push_back(e * scale);
  }
  return eff;
}

EffectiveChannel effective_qostbc_channel(const ChannelBlock& block, double phi) {
  return effective_qostbc_channel(std::array<ChannelBlock, 4>{block, block, block, block}, phi);
}

Complex qostbc_interference(const ChannelBlock& block) {
  if (block.nt < 4) {
    throw std::invalid_argument("qostbc_interference: need 4 transmit antennas");
  }
  Complex gamma = 0.0;
  for (int m = 0; m < block.nr; ++m) {
    gamma += block.h(0, m) * std::conj(block.h(3, m)) - block.h(1, m) * std::conj(block.h(2, m));
  }
  return gamma;
}

double ostbc_nulling_phase(const ChannelBlock& block) {
  Complex gamma = qostbc_interference(block);
  if (gamma == Complex(0.0, 0.0)) return 0.0;
  double phi = std::numbers::pi / 2.0 - std::arg(gamma);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return phi;
}

double ostbc_bound_gain(const ChannelBlock& block, int nt) {
  if (block.nt < nt || nt < 1) {
    throw std::invalid_argument("ostbc_bound_gain: bad nt");
  }
  double sum = 0.0;
  for (int i = 0; i < nt; ++i) {
    for (int m = 0; m < block.nr; ++m) sum += std::norm(block.h(i, m));
  }
  return sum / nt;
}

Complex csd_phase(double tone_freq_hz, double shift_ns) {
  return expi(-2.0 * std::numbers::pi * tone_freq_hz * shift_ns * 1e-9);
}

std::pair<int, int> fstd_pair(int tone_index, int nt) {
  if (nt != 3 && nt != 4) {
    throw std::invalid_argument("fstd_pair: nt must be 3 or 4");
  }
  if (tone_index < 1) {
    throw std::invalid_argument("fstd_pair: tones are 1-based");
  }
  int cycle = nt - 1;  // (1,2),(1,3)[,(1,4)]
  int second = 2 + (tone_index - 1) % cycle;
  return {1, second};
}

std::string SchemeId::name() const {
  switch (kind) {
    case SchemeKind::kSiso: return "siso";
    case SchemeKind::kAlamouti2x1: return "alamouti_2x1";
    case SchemeKind::kPhaseAligned: {
      std::string b = bits == FeedbackBits::kOne ? "1bit"
                      : bits == FeedbackBits::kTwo ? "2bit"
                                                   : "inf";
      return "phase_aligned_" + std::to_string(nt) + "tx_" + b;
    }
    case SchemeKind::kSpatialMapFixed: return "spatial_map_fixed_" + std::to_string(nt) + "tx";
    case SchemeKind::kOstbcNulled: return "ostbc_nulled";
    case SchemeKind::kQoStbc: return "qostbc";
    case SchemeKind::kBeamforming: return "beamforming";
    case SchemeKind::kCsd: return "csd";
    case SchemeKind::kFstd: return "fstd";
    case SchemeKind::kOstbcBound: return "ostbc_bound";
  }
  return "?";
}

std::vector<std::string> SchemeId::valid_names() {
  return {"siso",
          "alamouti_2x1",
          "phase_aligned_3tx_1bit",
          "phase_aligned_3tx_2bit",
          "phase_aligned_3tx_inf",
          "phase_aligned_4tx_1bit",
          "phase_aligned_4tx_2bit",
          "phase_aligned_4tx_inf",
          "spatial_map_fixed_3tx",
          "spatial_map_fixed_4tx",
          "ostbc_nulled",
          "qostbc",
          "beamforming",
          "csd",
          "fstd",
          "ostbc_bound"};
}

SchemeId SchemeId::parse(const std::string& name) {
  for (const std::string& n : valid_names()) {
    if (n != name) continue;
    SchemeId id;
    if (name == "siso") id.kind = SchemeKind::kSiso;
    else if (name == "alamouti_2x1") id.kind = SchemeKind::kAlamouti2x1;
    else if (name == "ostbc_nulled") id.kind = SchemeKind::kOstbcNulled;
    else if (name == "qostbc") id.kind = SchemeKind::kQoStbc;
    else if (name == "beamforming") id.kind = SchemeKind::kBeamforming;
    else if (name == "csd") id.kind = SchemeKind::kCsd;
    else if (name == "fstd") id.kind = SchemeKind::kFstd;
    else if (name == "ostbc_bound") id.kind = SchemeKind::kOstbcBound;
    else if (name.rfind("spatial_map_fixed_", 0) == 0) {
      id.kind = SchemeKind::kSpatialMapFixed;
      id.nt = name[18] - '0';
    } else {
      id.kind = SchemeKind::kPhaseAligned;
      id.nt = name[14] - '0';
      if (name.ends_with("_1bit")) id.bits = FeedbackBits::kOne;
      else if (name.ends_with("_2bit")) id.bits = FeedbackBits::kTwo;
      else id.bits = FeedbackBits::kInfinite;
    }
    return id;
  }
  std::string msg = "unknown scheme '" + name + "'; valid schemes:";
  for (const std::string& n : valid_names()) msg += " " + n;
  throw std::invalid_argument(msg);
}

}  // namespace mimolab
