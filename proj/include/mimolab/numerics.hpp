#pragma once

#include <Eigen/Dense>
#include <complex>

#include "mimolab/rng.hpp"

namespace mimolab {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Matrix with i.i.d. CN(0,1) entries, filled row by row.
CMat complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, RngStream& rng);

struct BeamformerResult {
  CVec weights;  // unit norm transmit vector
  double gain;   // ||H w||^2 = largest eigenvalue of H^H H
};

// Dominant right singular vector of h (N_r x N_t). N_r = 1 short-circuits to
// the conjugated channel row over its norm; otherwise power iteration on
// H^H H (tolerance 1e-12, 500 iterations cap). Throws std::domain_error on an
// all-zero channel.
BeamformerResult dominant_beamformer(const CMat& h);

// Post-equalization SINR of the unbiased MMSE estimator of each column
// (symbol) of g: sinr_i = 1 / [(I + G^H G / noise_var)^{-1}]_ii - 1.
// Columns carry unit-average-power symbols. noise_var must be > 0.
Eigen::VectorXd mmse_sinr(const CMat& g, double noise_var);

}  // namespace mimolab
