#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mimolab/codecs.hpp"
#include "mimolab/modem.hpp"

namespace mimolab {

enum class ChannelKind { kFlat, kAr1, kTdl };

struct ChannelConfig {
  ChannelKind type = ChannelKind::kFlat;
  double rho = 1.0;                   // ar1
  double rms_delay_spread_ns = 25.0;  // tdl
  double sample_period_ns = 50.0;     // tdl (20 MHz sampling)
  double tx_correlation = 0.5;        // tdl
};

struct OfdmConfig {
  int nfft = 64;
  std::vector<int> used_tones;  // default -26..-1, 1..26
  double cp_ns = 800.0;
  double tone_spacing_hz = 312500.0;
  int symbols_per_packet = 4;
};

struct StopConfig {
  long target_bit_errors = 400;    // uncoded early-stop, per point
  long target_packet_errors = 200; // coded early-stop, per point
  long max_codewords_per_point = 10'000'000;
  long max_packets_per_point = 20'000;
  long batch_codewords = 50'000;   // stop decisions happen on batch boundaries
  long batch_packets = 500;
};

enum class Modulation { kQpsk, kQam16 };

struct SimConfig {
  std::string experiment;         // snr_cdf | sensitivity | uncoded_ber | coded_ofdm_ber
  std::vector<SchemeId> schemes;  // validated against the experiment
  int nt = 4;
  int nr = 1;
  long trials = 100'000;
  std::vector<double> snr_grid_db;
  FeedbackBits feedback_bits = FeedbackBits::kTwo;
  std::vector<double> rho_grid;
  ChannelConfig channel;
  OfdmConfig ofdm;
  Modulation mod = Modulation::kQam16;
  bool mod_explicit = false;  // default is 16qam uncoded, qpsk coded
  CodeRate rate = CodeRate::kThreeQuarters;
  std::vector<double> csd_shifts_ns;  // default [0,-50,-100,-150] (nt=4) / [0,-100,-200] (nt=3)
  StopConfig stop;
  uint64_t master_seed = 20260809;
  int workers = 0;  // 0 -> MIMO_LAB_WORKERS env, then hardware concurrency

  ConstellationSpec constellation() const {
    return ConstellationSpec::qam(mod == Modulation::kQpsk ? 4 : 16);
  }
  CodeSpec code() const { return CodeSpec{7, 0133, 0171, rate}; }
};

/// Fills experiment-dependent defaults (schemes, grids, tones, CSD shifts)
/// and validates every invariant; throws std::invalid_argument with the
/// violated constraint.
void finalize_config(SimConfig& config);

/// Parses a JSON config file (or a manifest containing one under "config").
/// Unknown keys are errors naming the key.
SimConfig parse_config(const std::string& path);

/// Same, from a JSON text buffer.
SimConfig parse_config_text(const std::string& text);

/// Fully-resolved config as pretty JSON (replayable through parse_config).
std::string config_to_json(const SimConfig& config);

struct RunManifest {
  SimConfig config;
  std::string output_csv;
  std::string created_utc;
  std::string artifact_version;
};

std::string manifest_to_json(const RunManifest& manifest);

/// Worker count actually used for `requested` (resolves env/hardware defaults).
int resolve_workers(int requested);

}  // namespace mimolab
