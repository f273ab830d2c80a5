#include "mimolab/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace mimolab {

CMat complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("complex_gaussian_matrix: dimensions must be >= 1");
  }
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = rng.cgaussian();
    }
  }
  return m;
}

BeamformerResult dominant_beamformer(const CMat& h) {
  if (h.rows() < 1 || h.cols() < 1) {
    throw std::invalid_argument("dominant_beamformer: empty channel");
  }
  if (h.squaredNorm() == 0.0) {
    throw std::domain_error("dominant_beamformer: all-zero channel");
  }
  if (h.rows() == 1) {
    // Matched filter: w = h^H / ||h||.
    CVec w = h.row(0).adjoint();
    double n = w.norm();
    w /= n;
    return {w, n * n};
  }

  const CMat m = h.adjoint() * h;
  const Eigen::Index n = m.rows();

  // Start from the dominant column of M; M is PSD so the Rayleigh quotient
  // increases monotonically under the iteration.
  Eigen::Index start = 0;
  double best = -1.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    double cn = m.col(c).norm();
    if (cn > best) {
      best = cn;
      start = c;
    }
  }
  CVec v = m.col(start);
  v /= v.norm();

  double lambda = std::real((v.adjoint() * m * v)(0, 0));
  constexpr double kTol = 1e-12;
  for (int it = 0; it < 500; ++it) {
    CVec w = m * v;
    double wn = w.norm();
    if (wn == 0.0) break;  // v in the null space; gain 0 along this direction
    v = w / wn;
    double next = std::real((v.adjoint() * m * v)(0, 0));
    if (std::abs(next - lambda) <= kTol * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }

  // Fix the free phase: largest-magnitude entry real positive.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  Complex piv = v(imax);
  if (std::abs(piv) > 0.0) v *= std::conj(piv) / std::abs(piv);

  return {v, lambda};
}

Eigen::VectorXd mmse_sinr(const CMat& g, double noise_var) {
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("mmse_sinr: noise_var must be > 0");
  }
  const Eigen::Index n = g.cols();
  CMat a = CMat::Identity(n, n) + (g.adjoint() * g) / noise_var;
  CMat ainv = a.inverse();
  Eigen::VectorXd sinr(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 1.0 / std::real(ainv(i, i)) - 1.0;
    sinr(i) = s > 0.0 ? s : 0.0;
  }
  return sinr;
}

}  // namespace mimolab
