#pragma once

#include <iosfwd>

#include "mimolab/config.hpp"
#include "mimolab/receiver.hpp"

namespace mimolab {

// Per-trial output-SNR gains in dB relative to the orthogonal-STBC bound of
// the same channel realization.
struct CdfSeries {
  SchemeId scheme;
  std::vector<double> gains_db;  // trial order

  /// p-th percentile (p in [0,100]) of the sorted gains.
  double percentile(double p) const;
  double mean() const;
};

struct SnrCdfResult {
  std::vector<CdfSeries> series;
  const CdfSeries& find(const SchemeId& s) const;
};

struct SensitivityRow {
  SchemeId scheme;
  double rho = 1.0;
  double mean_gap_db = 0.0;  // mean output SNR (dB) minus the rho=1 QO-STBC mean
  long trials = 0;
};

struct SensitivityResult {
  std::vector<SensitivityRow> rows;
  double gap(const SchemeId& s, double rho) const;
  /// Scheme's loss at rho relative to its own rho=1 value (positive = loss).
  double loss(const SchemeId& s, double rho) const;
};

struct BerPoint {
  double snr_db = 0.0;
  uint64_t bits = 0;
  uint64_t errors = 0;
  double ber() const { return bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0; }
};

struct BerCurve {
  SchemeId scheme;
  std::vector<BerPoint> points;

  // SNR where the curve crosses `target` BER (log-linear interpolation over
  // points with at least min_errors errors); NaN when not bracketed.
  double snr_at_ber(double target, uint64_t min_errors) const;
};

struct BerResult {
  std::vector<BerCurve> curves;
  const BerCurve& find(const SchemeId& s) const;
};

SnrCdfResult run_snr_gain_cdf(const SimConfig& config);
SensitivityResult run_sensitivity(const SimConfig& config);
BerResult run_uncoded_ber(const SimConfig& config);
BerResult run_coded_ofdm_ber(const SimConfig& config);

// CSV schemas (stable):
//   snr_cdf     scheme,trial,gain_db
//   sensitivity scheme,rho,mean_gap_db,trials
//   ber         scheme,snr_db,bits,errors,ber
void write_snr_cdf_csv(std::ostream& os, const SnrCdfResult& result);
void write_sensitivity_csv(std::ostream& os, const SensitivityResult& result);
void write_ber_csv(std::ostream& os, const BerResult& result);

/// Dispatches on config.experiment, writes the CSV, returns one summary line per scheme.
std::vector<std::string> run_experiment_csv(const SimConfig& config, std::ostream& csv);

}  // namespace mimolab
