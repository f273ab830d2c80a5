#include "mimolab/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mimolab {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double db10(double x) { return 10.0 * std::log10(x); }
double undb10(double x) { return std::pow(10.0, x / 10.0); }

void parallel_chunks(long n, int workers, const std::function<void(int, long, long)>& fn) {
  workers = static_cast<int>(std::min<long>(workers, n));
  if (workers <= 1) {
    fn(0, 0, n);
    return;
  }
  long chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    long b = w * chunk;
    long e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, w, b, e);
  }
  for (std::thread& t : pool) t.join();
}

ChannelBlock sub_block(const ChannelBlock& block, int nt) {
  return {nt, block.nr, block.gains.topRows(nt)};
}

ChannelBlock pick_antennas(const ChannelBlock& block, int a, int b) {
  CMat g(2, block.nr);
  g.row(0) = block.gains.row(a);
  g.row(1) = block.gains.row(b);
  return {2, block.nr, std::move(g)};
}

double bf_gain(const ChannelBlock& block) {
  if (block.nr == 1) return block.gains.squaredNorm();
  return dominant_beamformer(block.gains.transpose()).gain;
}

// MMSE output SNR of a scheme on one flat realization (Fig. 2 statistic).
double output_snr_flat(const SchemeId& s, const ChannelBlock& block, double sigma2, int nt) {
  switch (s.kind) {
    case SchemeKind::kBeamforming:
      return bf_gain(block) / sigma2;
    case SchemeKind::kOstbcBound:
      return ostbc_bound_gain(block, nt) / sigma2;
    case SchemeKind::kPhaseAligned: {
      FeedbackWord w = quantize_theta(compute_alpha(block, s.nt), s.bits);
      return sigma_gain(block, w.theta, s.nt) / (s.nt * sigma2);
    }
    case SchemeKind::kQoStbc: {
      EffectiveChannel eff = effective_qostbc_channel(block, 0.0);
      return mmse_sinr(eff.stacked(), sigma2).mean();
    }
    default:
      throw std::invalid_argument("snr_cdf: unsupported scheme " + s.name());
  }
}

// MMSE output SNR when the channel moves across the codeword instants.
// Feedback (theta or the nulling phase) is stale: computed from instant 0.
double output_snr_timevarying(const SchemeId& s, const std::array<ChannelBlock, 4>& inst,
                              double sigma2) {
  switch (s.kind) {
    case SchemeKind::kAlamouti2x1: {
      EffectiveChannel eff = effective_alamouti_channel(sub_block(inst[0], 2),
                                                        sub_block(inst[1], 2), 0.0, 2);
      return mmse_sinr(eff.stacked(), sigma2).mean();
    }
    case SchemeKind::kPhaseAligned:
    case SchemeKind::kSpatialMapFixed: {
      double theta = 0.0;
      if (s.kind == SchemeKind::kPhaseAligned) {
        theta = quantize_theta(compute_alpha(inst[0], s.nt), s.bits).theta;
      }
      EffectiveChannel eff = effective_alamouti_channel(inst[0], inst[1], theta, s.nt);
      return mmse_sinr(eff.stacked(), sigma2).mean();
    }
    case SchemeKind::kQoStbc: {
      EffectiveChannel eff = effective_qostbc_channel(inst, 0.0);
      return mmse_sinr(eff.stacked(), sigma2).mean();
    }
    case SchemeKind::kOstbcNulled: {
      double phi = ostbc_nulling_phase(inst[0]);
      EffectiveChannel eff = effective_qostbc_channel(inst, phi);
      return mmse_sinr(eff.stacked(), sigma2).mean();
    }
    default:
      throw std::invalid_argument("sensitivity: unsupported scheme " + s.name());
  }
}

uint32_t rand_label(RngStream& rng, int order) {
  return rng.next_u32() & static_cast<uint32_t>(order - 1);
}

uint32_t bit_diff(uint32_t a, uint32_t b) { return std::popcount(a ^ b); }

// ---- uncoded BER trial chains ------------------------------------------

void scalar_trial(double gain, double sigma2, const ConstellationSpec& cs, RngStream& rng,
                  uint64_t& bits, uint64_t& errors) {
  // Unbiased post-detection model of an orthogonal rank-1 scheme with
  // effective gain `gain`: x_hat = x + CN(0, sigma2/gain).
  double nstd = std::sqrt(sigma2 / std::max(gain, 1e-300));
  for (int k = 0; k < 2; ++k) {
    uint32_t tx = rand_label(rng, cs.order);
    Complex y = qam_point(tx, cs) + nstd * rng.cgaussian();
    errors += bit_diff(tx, qam_hard(y, cs));
    bits += cs.bits_per_symbol();
  }
}

void pair_trial(const SchemeId& s, const ChannelBlock& block, double sigma2,
                const ConstellationSpec& cs, RngStream& rng, uint64_t& bits, uint64_t& errors) {
  uint32_t tx0 = rand_label(rng, cs.order);
  uint32_t tx1 = rand_label(rng, cs.order);
  SymbolPair pair{qam_point(tx0, cs), qam_point(tx1, cs)};
  Codeword cw = alamouti_encode(pair);

  int nt = 2;
  double theta = 0.0;
  if (s.kind == SchemeKind::kPhaseAligned || s.kind == SchemeKind::kSpatialMapFixed) {
    nt = s.nt;
    if (s.kind == SchemeKind::kPhaseAligned) {
      theta = quantize_theta(compute_alpha(block, nt), s.bits).theta;
    }
    cw = spatial_expand(cw, build_q(nt, {theta}));
  }
  ChannelBlock sub = sub_block(block, nt);
  ReceivedBlock rx = simulate_reception(cw, {sub}, sigma2, rng);
  EffectiveChannel eff = effective_alamouti_channel(sub, theta, nt);
  DetectionResult det = matched_filter_detect(rx, eff);
  errors += bit_diff(tx0, qam_hard(det.estimates(0) / det.diag_gain, cs));
  errors += bit_diff(tx1, qam_hard(det.estimates(1) / det.diag_gain, cs));
  bits += 2 * cs.bits_per_symbol();
}

void quad_trial(const SchemeId& s, const ChannelBlock& block, double sigma2,
                const ConstellationSpec& cs, RngStream& rng, uint64_t& bits, uint64_t& errors) {
  uint32_t tx[4];
  std::array<Complex, 4> syms;
  for (int k = 0; k < 4; ++k) {
    tx[k] = rand_label(rng, cs.order);
    syms[k] = qam_point(tx[k], cs);
  }
  double phi = s.kind == SchemeKind::kOstbcNulled ? ostbc_nulling_phase(block) : 0.0;
  Codeword cw = qostbc_encode(syms);
  if (phi != 0.0) {
    Complex rot(std::cos(phi), -std::sin(phi));
    cw.row(2) *= rot;
    cw.row(3) *= rot;
  }
  ReceivedBlock rx = simulate_reception(cw, {block}, sigma2, rng);
  EffectiveChannel eff = effective_qostbc_channel(block, phi);
  DetectionResult det = mmse_detect(rx, eff, sigma2);
  for (int k = 0; k < 4; ++k) {
    errors += bit_diff(tx[k], qam_hard(det.estimates(k), cs));
  }
  bits += 4 * cs.bits_per_symbol();
}

void uncoded_trial(const SchemeId& s, const ChannelBlock& block, double sigma2, int nt,
                   const ConstellationSpec& cs, RngStream& rng, uint64_t& bits,
                   uint64_t& errors) {
  switch (s.kind) {
    case SchemeKind::kSiso: {
      double g = 0.0;
      for (int m = 0; m < block.nr; ++m) g += std::norm(block.h(0, m));
      scalar_trial(g, sigma2, cs, rng, bits, errors);
      return;
    }
    case SchemeKind::kBeamforming:
      scalar_trial(bf_gain(block), sigma2, cs, rng, bits, errors);
      return;
    case SchemeKind::kOstbcBound:
      scalar_trial(ostbc_bound_gain(block, nt), sigma2, cs, rng, bits, errors);
      return;
    case SchemeKind::kAlamouti2x1:
    case SchemeKind::kPhaseAligned:
    case SchemeKind::kSpatialMapFixed:
      pair_trial(s, block, sigma2, cs, rng, bits, errors);
      return;
    case SchemeKind::kOstbcNulled:
    case SchemeKind::kQoStbc:
      quad_trial(s, block, sigma2, cs, rng, bits, errors);
      return;
    default:
      throw std::invalid_argument("uncoded_ber: unsupported scheme " + s.name());
  }
}

// ---- coded OFDM packet chain -------------------------------------------

// Per-packet chain for one scheme; returns message bit errors.
uint64_t coded_packet(const SchemeId& s, const SimConfig& cfg, const ToneChannelSet& tones,
                      const std::vector<uint8_t>& message, double sigma2, RngStream& rng) {
  const ConstellationSpec cs = cfg.constellation();
  const CodeSpec code = cfg.code();
  const int bps = cs.bits_per_symbol();
  const int ntones = static_cast<int>(tones.tones.size());
  const int nsym = cfg.ofdm.symbols_per_packet;

  std::vector<uint8_t> coded = conv_encode(message, code);

  // interleave + map, one block per OFDM symbol
  std::vector<std::vector<Complex>> xmit(nsym);
  for (int t = 0; t < nsym; ++t) {
    std::vector<uint8_t> chunk(coded.begin() + static_cast<long>(t) * ntones * bps,
                               coded.begin() + static_cast<long>(t + 1) * ntones * bps);
    xmit[t] = qam_map(interleave(chunk, bps, ntones), cs);
  }

  std::vector<std::vector<Complex>> est(nsym, std::vector<Complex>(ntones));
  std::vector<std::vector<double>> sinr(nsym, std::vector<double>(ntones));

  const double nstd = std::sqrt(sigma2);
  auto scalar_tone = [&](int k, double gain) {
    // Orthogonal rank-1 pipe: x_hat = x + CN(0, sigma2/gain).
    double s_lin = gain > 0.0 ? gain / sigma2 : 0.0;
    double escale = gain > 0.0 ? nstd / std::sqrt(gain) : 1e9;
    for (int t = 0; t < nsym; ++t) {
      est[t][k] = xmit[t][k] + escale * rng.cgaussian();
      sinr[t][k] = s_lin;
    }
  };

  for (int k = 0; k < ntones; ++k) {
    const ChannelBlock& b = tones.tones[k];
    double freq = tones.tone_indices[k] * tones.tone_spacing_hz;
    switch (s.kind) {
      case SchemeKind::kSiso: {
        double g = 0.0;
        for (int m = 0; m < b.nr; ++m) g += std::norm(b.h(0, m));
        scalar_tone(k, g);
        break;
      }
      case SchemeKind::kBeamforming:
        scalar_tone(k, bf_gain(b));
        break;
      case SchemeKind::kCsd: {
        double g = 0.0;
        double scale = 1.0 / std::sqrt(static_cast<double>(cfg.nt));
        for (int m = 0; m < b.nr; ++m) {
          Complex heq = 0.0;
          for (int i = 0; i < cfg.nt; ++i) {
            heq += b.h(i, m) * csd_phase(freq, cfg.csd_shifts_ns[i]);
          }
          g += std::norm(scale * heq);
        }
        scalar_tone(k, g);
        break;
      }
      case SchemeKind::kAlamouti2x1:
      case SchemeKind::kFstd:
      case SchemeKind::kPhaseAligned:
      case SchemeKind::kSpatialMapFixed: {
        ChannelBlock sub{0, 0, {}};
        double theta = 0.0;
        int nt_eff = 2;
        double amp = -1.0;  // default per-antenna scale 1/sqrt(rows)
        if (s.kind == SchemeKind::kAlamouti2x1) {
          sub = sub_block(b, 2);
        } else if (s.kind == SchemeKind::kFstd) {
          auto [a1, a2] = fstd_pair(k + 1, cfg.nt);
          sub = pick_antennas(b, a1 - 1, a2 - 1);
          amp = 1.0 / std::sqrt(static_cast<double>(cfg.nt));
        } else {
          nt_eff = s.nt;
          sub = sub_block(b, nt_eff);
          if (s.kind == SchemeKind::kPhaseAligned) {
            theta = quantize_theta(compute_alpha(sub, nt_eff), s.bits).theta;
          }
        }
        EffectiveChannel eff = effective_alamouti_channel(sub, theta, s.kind == SchemeKind::kFstd ? 2 : nt_eff);
        if (s.kind == SchemeKind::kFstd) {
          // Active pair radiates at 1/sqrt(nt) amplitude (half total power).
          double fix = std::sqrt(2.0 / static_cast<double>(cfg.nt));
          for (CMat& h : eff.per_rx) h *= fix;
        }
        double gain = eff.diag_gain();
        double s_lin = gain / sigma2;
        CMat q;
        if (s.kind == SchemeKind::kPhaseAligned || s.kind == SchemeKind::kSpatialMapFixed) {
          q = build_q(nt_eff, {theta});
        }
        for (int t = 0; t + 1 < nsym; t += 2) {
          Codeword cw = alamouti_encode({xmit[t][k], xmit[t + 1][k]});
          if (q.size()) cw = spatial_expand(cw, q);
          ReceivedBlock rx = simulate_reception(cw, {sub}, sigma2, rng, amp);
          DetectionResult det = matched_filter_detect(rx, eff);
          est[t][k] = det.estimates(0) / gain;
          est[t + 1][k] = det.estimates(1) / gain;
          sinr[t][k] = s_lin;
          sinr[t + 1][k] = s_lin;
        }
        break;
      }
      case SchemeKind::kOstbcNulled:
      case SchemeKind::kQoStbc: {
        double phi = s.kind == SchemeKind::kOstbcNulled ? ostbc_nulling_phase(b) : 0.0;
        EffectiveChannel eff = effective_qostbc_channel(b, phi);
        Complex rot(std::cos(phi), -std::sin(phi));
        for (int t = 0; t + 3 < nsym; t += 4) {
          Codeword cw = qostbc_encode({xmit[t][k], xmit[t + 1][k], xmit[t + 2][k], xmit[t + 3][k]});
          if (phi != 0.0) {
            cw.row(2) *= rot;
            cw.row(3) *= rot;
          }
          ReceivedBlock rx = simulate_reception(cw, {b}, sigma2, rng);
          DetectionResult det = mmse_detect(rx, eff, sigma2);
          for (int u = 0; u < 4; ++u) {
            est[t + u][k] = det.estimates(u);
            sinr[t + u][k] = det.post_sinr(u);
          }
        }
        break;
      }
      default:
        throw std::invalid_argument("coded_ofdm_ber: unsupported scheme " + s.name());
    }
  }

  // soft demap, deinterleave, decode
  std::vector<double> llrs;
  llrs.reserve(static_cast<size_t>(nsym) * ntones * bps);
  std::vector<double> block(static_cast<size_t>(ntones) * bps);
  for (int t = 0; t < nsym; ++t) {
    for (int k = 0; k < ntones; ++k) {
      qam_llr(est[t][k], sinr[t][k], cs, &block[static_cast<size_t>(k) * bps]);
    }
    std::vector<double> de = deinterleave(block, bps, ntones);
    llrs.insert(llrs.end(), de.begin(), de.end());
  }
  std::vector<uint8_t> decoded = viterbi_decode(llrs, code);

  uint64_t errors = 0;
  for (size_t i = 0; i < message.size(); ++i) errors += decoded[i] != message[i];
  return errors;
}

// ---- batched early-stopping BER loop -------------------------------------

struct SchemeCounters {
  uint64_t bits = 0;
  uint64_t errors = 0;
  uint64_t packet_errors = 0;
};

// Runs one BER point with deterministic batching: trial streams are
// (master_seed, point_base + index) and early stopping only happens on batch
// boundaries, so results do not depend on the worker count.
void run_ber_point(const SimConfig& cfg, uint64_t point_base, long batch, long cap,
                   long target_errors, bool packet_mode,
                   const std::function<void(RngStream&, std::vector<SchemeCounters>&,
                                            const std::vector<uint8_t>&)>& trial_fn,
                   std::vector<SchemeCounters>& totals) {
  const int nschemes = static_cast<int>(cfg.schemes.size());
  const int workers = resolve_workers(cfg.workers);
  std::vector<uint8_t> active(nschemes, 1);

  for (long start = 0; start < cap; start += batch) {
    bool any = false;
    for (uint8_t a : active) any |= a;
    if (!any) break;
    long count = std::min(batch, cap - start);

    std::vector<std::vector<SchemeCounters>> local(
        workers, std::vector<SchemeCounters>(nschemes));
    parallel_chunks(count, workers, [&](int w, long b, long e) {
      for (long t = b; t < e; ++t) {
        RngStream rng(cfg.master_seed, point_base + static_cast<uint64_t>(start + t));
        trial_fn(rng, local[w], active);
      }
    });
    for (int w = 0; w < workers; ++w) {
      for (int i = 0; i < nschemes; ++i) {
        totals[i].bits += local[w][i].bits;
        totals[i].errors += local[w][i].errors;
        totals[i].packet_errors += local[w][i].packet_errors;
      }
    }
    for (int i = 0; i < nschemes; ++i) {
      uint64_t n = packet_mode ? totals[i].packet_errors : totals[i].errors;
      if (n >= static_cast<uint64_t>(target_errors)) active[i] = 0;
    }
  }
}

void append_csv_double(std::string& out, double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  out += buf;
}

}  // namespace

double CdfSeries::percentile(double p) const {
  std::vector<double> sorted = gains_db;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) return kNan;
  double idx = std::clamp(p, 0.0, 100.0) / 100.0 * (sorted.size() - 1);
  return sorted[static_cast<size_t>(std::llround(idx))];
}

double CdfSeries::mean() const {
  double s = 0.0;
  for (double v : gains_db) s += v;
  return gains_db.empty() ? kNan : s / gains_db.size();
}

const CdfSeries& SnrCdfResult::find(const SchemeId& s) const {
  for (const CdfSeries& c : series) {
    if (c.scheme == s) return c;
  }
  throw std::out_of_range("SnrCdfResult: scheme not present: " + s.name());
}

double SensitivityResult::gap(const SchemeId& s, double rho) const {
  for (const SensitivityRow& r : rows) {
    if (r.scheme == s && r.rho == rho) return r.mean_gap_db;
  }
  throw std::out_of_range("SensitivityResult: no row for " + s.name());
}

double SensitivityResult::loss(const SchemeId& s, double rho) const {
  return gap(s, 1.0) - gap(s, rho);
}

double BerCurve::snr_at_ber(double target, uint64_t min_errors) const {
  std::vector<const BerPoint*> good;
  for (const BerPoint& p : points) {
    if (p.errors >= min_errors && p.bits > 0) good.push_back(&p);
  }
  for (size_t i = 0; i + 1 < good.size(); ++i) {
    double b0 = good[i]->ber(), b1 = good[i + 1]->ber();
    if ((b0 >= target && b1 <= target) || (b0 <= target && b1 >= target)) {
      if (b0 == b1) return good[i]->snr_db;
      double l0 = std::log10(b0), l1 = std::log10(b1), lt = std::log10(target);
      double f = (lt - l0) / (l1 - l0);
      return good[i]->snr_db + f * (good[i + 1]->snr_db - good[i]->snr_db);
    }
  }
  return kNan;
}

const BerCurve& BerResult::find(const SchemeId& s) const {
  for (const BerCurve& c : curves) {
    if (c.scheme == s) return c;
  }
  throw std::out_of_range("BerResult: scheme not present: " + s.name());
}

SnrCdfResult run_snr_gain_cdf(const SimConfig& cfg) {
  const double sigma2 = undb10(-cfg.snr_grid_db.at(0));
  const long n = cfg.trials;
  const int nschemes = static_cast<int>(cfg.schemes.size());

  SnrCdfResult result;
  result.series.resize(nschemes);
  for (int i = 0; i < nschemes; ++i) {
    result.series[i].scheme = cfg.schemes[i];
    result.series[i].gains_db.resize(n);
  }

  parallel_chunks(n, resolve_workers(cfg.workers), [&](int, long b, long e) {
    for (long t = b; t < e; ++t) {
      RngStream rng(cfg.master_seed, static_cast<uint64_t>(t));
      ChannelBlock block = draw_flat_block(cfg.nt, cfg.nr, rng);
      double ref = ostbc_bound_gain(block, cfg.nt) / sigma2;
      for (int i = 0; i < nschemes; ++i) {
        double snr = output_snr_flat(cfg.schemes[i], block, sigma2, cfg.nt);
        result.series[i].gains_db[t] = db10(snr / ref);
      }
    }
  });
  return result;
}

SensitivityResult run_sensitivity(const SimConfig& cfg) {
  const double sigma2 = cfg.snr_grid_db.empty() ? 0.1 : undb10(-cfg.snr_grid_db[0]);
  const long n = cfg.trials;
  const int nschemes = static_cast<int>(cfg.schemes.size());
  const int nrho = static_cast<int>(cfg.rho_grid.size());

  // Per-trial output SNR in dB; innovations are shared across rho values so
  // the curves differ only through rho.
  std::vector<std::vector<double>> snr_db(
      static_cast<size_t>(nschemes) * nrho, std::vector<double>(n));

  parallel_chunks(n, resolve_workers(cfg.workers), [&](int, long b, long e) {
    for (long t = b; t < e; ++t) {
      RngStream rng(cfg.master_seed, static_cast<uint64_t>(t));
      ChannelBlock h0 = draw_flat_block(cfg.nt, cfg.nr, rng);
      std::array<ChannelBlock, 3> g = {draw_flat_block(cfg.nt, cfg.nr, rng),
                                       draw_flat_block(cfg.nt, cfg.nr, rng),
                                       draw_flat_block(cfg.nt, cfg.nr, rng)};
      for (int r = 0; r < nrho; ++r) {
        double rho = cfg.rho_grid[r];
        std::array<ChannelBlock, 4> inst{h0, h0, h0, h0};
        for (int k = 1; k < 4; ++k) inst[k] = ar1_step(inst[k - 1], rho, g[k - 1]);
        for (int i = 0; i < nschemes; ++i) {
          double v = output_snr_timevarying(cfg.schemes[i], inst, sigma2);
          snr_db[static_cast<size_t>(i) * nrho + r][t] = db10(v);
        }
      }
    }
  });

  // Sequential reduction keeps dB means bit-identical across worker counts.
  auto mean_of = [&](int i, int r) {
    const std::vector<double>& v = snr_db[static_cast<size_t>(i) * nrho + r];
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(n);
  };

  int qostbc_idx = -1;
  int rho1_idx = -1;
  for (int i = 0; i < nschemes; ++i) {
    if (cfg.schemes[i].kind == SchemeKind::kQoStbc) qostbc_idx = i;
  }
  for (int r = 0; r < nrho; ++r) {
    if (cfg.rho_grid[r] == 1.0) rho1_idx = r;
  }
  double ref = mean_of(qostbc_idx, rho1_idx);

  SensitivityResult result;
  for (int i = 0; i < nschemes; ++i) {
    for (int r = 0; r < nrho; ++r) {
      result.rows.push_back({cfg.schemes[i], cfg.rho_grid[r], mean_of(i, r) - ref, n});
    }
  }
  return result;
}

BerResult run_uncoded_ber(const SimConfig& cfg) {
  const ConstellationSpec cs = cfg.constellation();
  const int nschemes = static_cast<int>(cfg.schemes.size());

  BerResult result;
  result.curves.resize(nschemes);
  for (int i = 0; i < nschemes; ++i) result.curves[i].scheme = cfg.schemes[i];

  for (size_t p = 0; p < cfg.snr_grid_db.size(); ++p) {
    const double sigma2 = undb10(-cfg.snr_grid_db[p]);
    uint64_t base = static_cast<uint64_t>(p) * static_cast<uint64_t>(cfg.stop.max_codewords_per_point);
    std::vector<SchemeCounters> totals(nschemes);
    run_ber_point(
        cfg, base, cfg.stop.batch_codewords, cfg.stop.max_codewords_per_point,
        cfg.stop.target_bit_errors, /*packet_mode=*/false,
        [&](RngStream& rng, std::vector<SchemeCounters>& acc,
            const std::vector<uint8_t>& active) {
          ChannelBlock block = draw_flat_block(cfg.nt, cfg.nr, rng);
          for (int i = 0; i < nschemes; ++i) {
            if (!active[i]) continue;
            uncoded_trial(cfg.schemes[i], block, sigma2, cfg.nt, cs, rng, acc[i].bits,
                          acc[i].errors);
          }
        },
        totals);
    for (int i = 0; i < nschemes; ++i) {
      result.curves[i].points.push_back(
          {cfg.snr_grid_db[p], totals[i].bits, totals[i].errors});
    }
  }
  return result;
}

BerResult run_coded_ofdm_ber(const SimConfig& cfg) {
  const TdlProfile profile = build_tdl_profile(cfg.channel.rms_delay_spread_ns,
                                               cfg.channel.sample_period_ns,
                                               cfg.channel.tx_correlation);
  const ConstellationSpec cs = cfg.constellation();
  const CodeSpec code = cfg.code();
  const size_t per_packet = cfg.ofdm.used_tones.size() * cs.bits_per_symbol() *
                            cfg.ofdm.symbols_per_packet;
  const size_t msg_len = message_length_for(per_packet, code);
  const int nschemes = static_cast<int>(cfg.schemes.size());

  BerResult result;
  result.curves.resize(nschemes);
  for (int i = 0; i < nschemes; ++i) result.curves[i].scheme = cfg.schemes[i];

  for (size_t p = 0; p < cfg.snr_grid_db.size(); ++p) {
    const double sigma2 = undb10(-cfg.snr_grid_db[p]);
    uint64_t base = static_cast<uint64_t>(p) * static_cast<uint64_t>(cfg.stop.max_packets_per_point);
    std::vector<SchemeCounters> totals(nschemes);
    run_ber_point(
        cfg, base, cfg.stop.batch_packets, cfg.stop.max_packets_per_point,
        cfg.stop.target_packet_errors, /*packet_mode=*/true,
        [&](RngStream& rng, std::vector<SchemeCounters>& acc,
            const std::vector<uint8_t>& active) {
          ToneChannelSet tones = draw_tdl_tones(profile, cfg.nt, cfg.nr, cfg.ofdm.nfft,
                                                cfg.ofdm.used_tones, cfg.ofdm.tone_spacing_hz,
                                                rng);
          std::vector<uint8_t> message(msg_len);
          for (uint8_t& b : message) b = static_cast<uint8_t>(rng.next_u32() & 1u);
          for (int i = 0; i < nschemes; ++i) {
            if (!active[i]) continue;
            uint64_t errs = coded_packet(cfg.schemes[i], cfg, tones, message, sigma2, rng);
            acc[i].bits += msg_len;
            acc[i].errors += errs;
            acc[i].packet_errors += errs > 0;
          }
        },
        totals);
    for (int i = 0; i < nschemes; ++i) {
      result.curves[i].points.push_back(
          {cfg.snr_grid_db[p], totals[i].bits, totals[i].errors});
    }
  }
  return result;
}

void write_snr_cdf_csv(std::ostream& os, const SnrCdfResult& result) {
  os << "scheme,trial,gain_db\n";
  std::string line;
  for (const CdfSeries& s : result.series) {
    std::string name = s.scheme.name();
    for (size_t t = 0; t < s.gains_db.size(); ++t) {
      line.clear();
      line += name;
      line += ',';
      line += std::to_string(t);
      line += ',';
      append_csv_double(line, s.gains_db[t], "%.10g");
      line += '\n';
      os << line;
    }
  }
}

void write_sensitivity_csv(std::ostream& os, const SensitivityResult& result) {
  os << "scheme,rho,mean_gap_db,trials\n";
  for (const SensitivityRow& r : result.rows) {
    std::string line = r.scheme.name();
    line += ',';
    append_csv_double(line, r.rho, "%.6g");
    line += ',';
    append_csv_double(line, r.mean_gap_db, "%.10g");
    line += ',';
    line += std::to_string(r.trials);
    line += '\n';
    os << line;
  }
}

void write_ber_csv(std::ostream& os, const BerResult& result) {
  os << "scheme,snr_db,bits,errors,ber\n";
  for (const BerCurve& c : result.curves) {
    for (const BerPoint& p : c.points) {
      std::string line = c.scheme.name();
      line += ',';
      append_csv_double(line, p.snr_db, "%.6g");
      line += ',';
      line += std::to_string(p.bits);
      line += ',';
      line += std::to_string(p.errors);
      line += ',';
      append_csv_double(line, p.ber(), "%.10g");
      line += '\n';
      os << line;
    }
  }
}

std::vector<std::string> run_experiment_csv(const SimConfig& cfg, std::ostream& csv) {
  std::vector<std::string> summaries;
  char buf[160];
  if (cfg.experiment == "snr_cdf") {
    SnrCdfResult r = run_snr_gain_cdf(cfg);
    write_snr_cdf_csv(csv, r);
    for (const CdfSeries& s : r.series) {
      std::snprintf(buf, sizeof(buf), "%s: median gain %+.2f dB (p10 %+.2f, p90 %+.2f, mean %+.2f)",
                    s.scheme.name().c_str(), s.percentile(50), s.percentile(10), s.percentile(90),
                    s.mean());
      summaries.emplace_back(buf);
    }
  } else if (cfg.experiment == "sensitivity") {
    SensitivityResult r = run_sensitivity(cfg);
    write_sensitivity_csv(csv, r);
    double rho_min = *std::min_element(cfg.rho_grid.begin(), cfg.rho_grid.end());
    for (const SchemeId& s : cfg.schemes) {
      std::snprintf(buf, sizeof(buf), "%s: loss %.2f dB at rho=%.3g (vs own rho=1)",
                    s.name().c_str(), r.loss(s, rho_min), rho_min);
      summaries.emplace_back(buf);
    }
  } else if (cfg.experiment == "uncoded_ber" || cfg.experiment == "coded_ofdm_ber") {
    BerResult r = cfg.experiment == "uncoded_ber" ? run_uncoded_ber(cfg) : run_coded_ofdm_ber(cfg);
    write_ber_csv(csv, r);
    for (const BerCurve& c : r.curves) {
      double x = c.snr_at_ber(1e-3, 1);
      std::snprintf(buf, sizeof(buf), "%s: %zu points, snr@ber1e-3 = %.2f dB",
                    c.scheme.name().c_str(), c.points.size(), x);
      summaries.emplace_back(buf);
    }
  } else {
    throw std::invalid_argument("unknown experiment " + cfg.experiment);
  }
  return summaries;
}

}  // namespace mimolab
