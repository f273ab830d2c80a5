#include "mimolab/feedback.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mimolab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_nt(const ChannelBlock& block, int nt) {
  if (nt != 3 && nt != 4) {
    throw std::invalid_argument("feedback: nt must be 3 or 4");
  }
  if (block.nt < nt) {
    throw std::invalid_argument("feedback: block has fewer antennas than nt");
  }
}

}  // namespace

Complex compute_alpha(const ChannelBlock& block, int nt) {
  check_nt(block, nt);
  Complex alpha = 0.0;
  for (int m = 0; m < block.nr; ++m) {
    alpha += std::conj(block.h(0, m)) * block.h(2, m);
    if (nt == 4) alpha += std::conj(block.h(1, m)) * block.h(3, m);
  }
  return alpha;
}

double optimal_theta(Complex alpha) {
  if (alpha == Complex(0.0, 0.0)) return 0.0;
  double t = std::arg(alpha);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double sigma_gain(const ChannelBlock& block, double theta, int nt) {
  check_nt(block, nt);
  double sum = 0.0;
  for (int i = 0; i < nt; ++i) {
    for (int m = 0; m < block.nr; ++m) {
      sum += std::norm(block.h(i, m));
    }
  }
  Complex rot(std::cos(theta), -std::sin(theta));
  return sum + 2.0 * std::real(rot * compute_alpha(block, nt));
}

std::vector<double> feedback_codebook(FeedbackBits bits) {
  switch (bits) {
    case FeedbackBits::kOne:
      return {0.0, std::numbers::pi};
    case FeedbackBits::kTwo:
      return {0.0, std::numbers::pi / 2.0, std::numbers::pi, 3.0 * std::numbers::pi / 2.0};
    case FeedbackBits::kInfinite:
      return {};
  }
  return {};
}

FeedbackWord quantize_theta(Complex alpha, FeedbackBits bits) {
  if (bits == FeedbackBits::kInfinite) {
    return {optimal_theta(alpha), bits, -1};
  }
  const std::vector<double> codebook = feedback_codebook(bits);
  int best = 0;
  double best_metric = -1e300;
  for (size_t i = 0; i < codebook.size(); ++i) {
    // Strict > keeps the smaller index on ties.
    Complex rot(std::cos(codebook[i]), -std::sin(codebook[i]));
    double metric = std::real(rot * alpha);
    if (metric > best_metric) {
      best_metric = metric;
      best = static_cast<int>(i);
    }
  }
  return {codebook[best], bits, best};
}

}  // namespace mimolab
