#include "mimolab/rng.hpp"

#include <cmath>
#include <numbers>

namespace mimolab {
namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  uint64_t p = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}

}  // namespace

RngStream::RngStream(uint64_t master_seed, uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {}

void RngStream::refill() {
  // Counter = (block, stream_id), key = master_seed.
  uint32_t c0 = static_cast<uint32_t>(block_);
  uint32_t c1 = static_cast<uint32_t>(block_ >> 32);
  uint32_t c2 = static_cast<uint32_t>(stream_id_);
  uint32_t c3 = static_cast<uint32_t>(stream_id_ >> 32);
  uint32_t k0 = static_cast<uint32_t>(master_seed_);
  uint32_t k1 = static_cast<uint32_t>(master_seed_ >> 32);
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c0, hi0, lo0);
    mulhilo(kMul1, c2, hi1, lo1);
    uint32_t n0 = hi1 ^ c1 ^ k0;
    uint32_t n1 = lo1;
    uint32_t n2 = hi0 ^ c3 ^ k1;
    uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  out_[0] = c0;
  out_[1] = c1;
  out_[2] = c2;
  out_[3] = c3;
  ++block_;
  idx_ = 0;
}

uint32_t RngStream::next_u32() {
  if (idx_ >= 4) refill();
  return out_[idx_++];
}

uint64_t RngStream::next_u64() {
  uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (have_cached_gauss_) {
    have_cached_gauss_ = false;
    return cached_gauss_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  cached_gauss_ = r * std::sin(a);
  have_cached_gauss_ = true;
  return r * std::cos(a);
}

std::complex<double> RngStream::cgaussian() {
  double re = gaussian();
  double im = gaussian();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

}  // namespace mimolab
