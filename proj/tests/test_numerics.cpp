#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "mimolab/numerics.hpp"

using namespace mimolab;

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool same = true, diff = false;
  for (int i = 0; i < 256; ++i) {
    uint64_t va = a.next_u64();
    same &= va == b.next_u64();
    diff |= va != c.next_u64();
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("complex gaussian statistics") {
  RngStream rng(1, 0);
  const int n = 1'000'000;
  Complex mean = 0.0;
  double power = 0.0;
  for (int i = 0; i < n; ++i) {
    Complex v = rng.cgaussian();
    mean += v;
    power += std::norm(v);
  }
  mean /= static_cast<double>(n);
  power /= static_cast<double>(n);
  CHECK(std::abs(mean) < 0.01);
  CHECK(power == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("complex gaussian matrix basics") {
  RngStream r1(9, 3), r2(9, 3);
  CMat a = complex_gaussian_matrix(3, 4, r1);
  CMat b = complex_gaussian_matrix(3, 4, r2);
  CHECK(a == b);  // same (seed, stream) twice
  CHECK_THROWS(complex_gaussian_matrix(0, 4, r1));

  // Hermitian transpose is an involution, exactly.
  CMat aa = a.adjoint().adjoint();
  CHECK(aa == a);
}

TEST_CASE("dominant beamformer closed forms") {
  CMat h(1, 4);
  h << 1, 1, 1, 1;
  BeamformerResult r = dominant_beamformer(h);
  CHECK(r.gain == doctest::Approx(4.0));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(r.weights(i) - Complex(0.5, 0.0)) < 1e-12);

  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  BeamformerResult rd = dominant_beamformer(d);
  CHECK(rd.gain == doctest::Approx(4.0));
  CHECK(std::abs(rd.weights(0) - Complex(1.0, 0.0)) < 1e-9);
  CHECK(std::abs(rd.weights(1)) < 1e-9);

  CHECK_THROWS_AS(dominant_beamformer(CMat::Zero(2, 2)), std::domain_error);
}

TEST_CASE("dominant beamformer matches the rank-2 eigenvalue oracle") {
  // For a 2x4 H the nonzero eigenvalues of H^H H equal those of the 2x2
  // H H^H, available in closed form from the characteristic polynomial.
  RngStream rng(5, 1);
  for (int trial = 0; trial < 50; ++trial) {
    CMat h = complex_gaussian_matrix(2, 4, rng);
    Eigen::Matrix2cd s = h * h.adjoint();
    double tr = std::real(s.trace());
    double det = std::real(s.determinant());
    double lmax = 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
    BeamformerResult r = dominant_beamformer(h);
    CHECK(r.gain == doctest::Approx(lmax).epsilon(1e-9));
    CHECK(r.weights.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((h * r.weights).squaredNorm() == doctest::Approx(r.gain).epsilon(1e-9));
  }
}

TEST_CASE("dominant beamformer dominates random unit vectors") {
  RngStream rng(6, 2);
  CMat h = complex_gaussian_matrix(2, 4, rng);
  BeamformerResult r = dominant_beamformer(h);
  double best = 0.0;
  for (int i = 0; i < 100'000; ++i) {
    CVec u(4);
    for (int k = 0; k < 4; ++k) u(k) = rng.cgaussian();
    u /= u.norm();
    best = std::max(best, (h * u).squaredNorm());
  }
  CHECK(r.gain >= best * (1.0 - 1e-9));
}

TEST_CASE("mmse sinr closed forms") {
  CMat g1(1, 1);
  g1(0, 0) = 1.0;
  Eigen::VectorXd s = mmse_sinr(g1, 1.0);
  CHECK(s(0) == doctest::Approx(1.0).epsilon(1e-12));

  // Orthogonal columns with squared norm Sigma: sinr = Sigma / sigma2.
  // Alamouti structure [[a, b], [-b*, a*]] has exactly orthogonal columns.
  Complex a(1, 1), b(2, -1);
  CMat g2(2, 2);
  g2 << a, b, -std::conj(b), std::conj(a);
  CMat gram = g2.adjoint() * g2;
  CHECK(std::abs(gram(0, 1)) < 1e-14);
  double sigma_col = std::real(gram(0, 0));
  for (double nv : {0.1, 0.5, 2.0}) {
    Eigen::VectorXd si = mmse_sinr(g2, nv);
    CHECK(si(0) == doctest::Approx(sigma_col / nv).epsilon(1e-12));
    CHECK(si(1) == doctest::Approx(sigma_col / nv).epsilon(1e-12));
  }

  Eigen::VectorXd z = mmse_sinr(CMat::Zero(4, 2), 0.3);
  CHECK(z(0) == 0.0);
  CHECK(z(1) == 0.0);

  CHECK_THROWS(mmse_sinr(g1, 0.0));
  CHECK_THROWS(mmse_sinr(g1, -1.0));
}

TEST_CASE("mmse sinr is monotone nonincreasing in noise") {
  RngStream rng(11, 4);
  for (int trial = 0; trial < 20; ++trial) {
    CMat g = complex_gaussian_matrix(4, 3, rng);
    Eigen::VectorXd prev = mmse_sinr(g, 0.01);
    for (double nv : {0.1, 1.0, 10.0, 100.0}) {
      Eigen::VectorXd cur = mmse_sinr(g, nv);
      for (int i = 0; i < 3; ++i) CHECK(cur(i) <= prev(i) * (1 + 1e-12) + 1e-12);
      prev = cur;
    }
  }
}
