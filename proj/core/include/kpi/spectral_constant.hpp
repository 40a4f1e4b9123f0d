#pragma once

// Spectral inequality constant: the sharp kappa(m0) in
//
//     sum_{|k| <= m0} |c_k|^2 <= kappa(m0) \int |g sum c_k e^{ikx}|^2 dx,
//
// i.e. kappa = 1 / lambda_min(M) with the Toeplitz matrix
// M[j, k] = \int g^2 e^{i(k - j)x} dx (grid quadrature). M is exponentially
// ill-conditioned in m0 for smooth g, so it is factored in multiprecision.

#include <Eigen/Dense>

#include "kpi/control_profile.hpp"

namespace kpi {

struct SpectralConstant {
  int m0 = 0;
  double kappa = 0.0;
  /// Smallest eigenvalue of M, equal to 1 / kappa.
  double lambda_min = 0.0;
  /// Decimal digits used for the factorization.
  int digits = 0;
  /// Unit coefficient vector c_{-m0..m0} attaining the bound.
  Eigen::VectorXcd extremal;
};

/// Toeplitz matrix M in double precision (order 2 m0 + 1).
Eigen::MatrixXcd spectral_gram(const ControlProfile& g, int m0);

/// kappa(m0). Throws ParameterError for m0 < 0 or m0 above the grid window,
/// NumericalConsistencyError ("infinite constant") when M is numerically
/// singular even at the highest working precision.
SpectralConstant spectral_constant(const ControlProfile& g, int m0);

}  // namespace kpi
