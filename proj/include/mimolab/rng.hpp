#pragma once

#include <complex>
#include <cstdint>

namespace mimolab {

// Counter-based PRNG (Philox4x32-10). A stream is keyed by
// (master_seed, stream_id): equal keys replay the same sequence and
// distinct stream_ids are statistically independent, so Monte-Carlo
// trials can use stream_id = trial index and results do not depend on
// which worker ran the trial.
class RngStream {
 public:
  RngStream(uint64_t master_seed, uint64_t stream_id);

  uint64_t master_seed() const { return master_seed_; }
  uint64_t stream_id() const { return stream_id_; }

  uint32_t next_u32();
  uint64_t next_u64();

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal via Box-Muller (second value cached).
  double gaussian();

  /// Circularly-symmetric CN(0,1): real/imag each N(0, 1/2).
  std::complex<double> cgaussian();

 private:
  void refill();

  uint64_t master_seed_;
  uint64_t stream_id_;
  uint64_t block_ = 0;
  uint32_t out_[4];
  int idx_ = 4;
  double cached_gauss_ = 0.0;
  bool have_cached_gauss_ = false;
};

}  // namespace mimolab
