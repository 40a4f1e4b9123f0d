#pragma once

// Dispersion relations of the (fractional) linear KP-I equation
//
//     u_t - |D_x|^alpha u_x - d_x^{-1} u_yy = 0,
//
// whose Fourier modes evolve as u_hat(t) = e^{i t omega} u_hat(0) with
//
//     omega(k, l) = |k|^alpha k + l^2 / k          (full 2D)
//     omega(k)    = |k|^alpha k + lambda^2 / k     (reduced 1D, transverse
//                                                    frequency lambda).
//
// alpha = 2 is KP-I itself. The continuous symbol
// phi(xi) = |xi|^alpha xi + lambda^2 / xi has exactly two critical points
// +-xi0, xi0 = (lambda^2 / (alpha + 1))^{1 / (alpha + 2)}, where the group
// velocity vanishes.

#include <optional>
#include <utility>

namespace kpi {

enum class DispersionMode { Reduced1D, Full2D };

struct DispersionParams {
  double alpha = 2.0;
  /// Transverse parameter of the reduced equation; ignored in Full2D mode.
  double lambda = 0.0;
  DispersionMode mode = DispersionMode::Full2D;

  static DispersionParams full(double alpha);
  static DispersionParams reduced(double alpha, double lambda);

  /// Throws ParameterError unless alpha > 0 and lambda >= 0.
  void validate() const;
};

/// omega(k, l). Throws DomainError for k = 0.
double omega(int k, int l, const DispersionParams& p);
/// The same value in extended precision, for phase reduction.
long double omega_extended(int k, int l, const DispersionParams& p);

/// phi(xi) = |xi|^alpha xi + lambda^2 / xi.
double symbol(double xi, const DispersionParams& p);
/// phi'(xi) = (alpha + 1)|xi|^alpha - lambda^2 / xi^2. DomainError at xi = 0.
double group_velocity(double xi, const DispersionParams& p);
/// phi''(xi) = alpha (alpha + 1) |xi|^{alpha - 1} sgn(xi) + 2 lambda^2 / xi^3.
double symbol_second_derivative(double xi, const DispersionParams& p);

struct CriticalPoint {
  double xi0 = 0.0;
  /// phi''(xi0).
  double phi_pp = 0.0;
  /// phi''(xi0) / 2, the Schrodinger coefficient of the local expansion.
  double a0 = 0.0;
};

/// The critical points (+xi0, -xi0); empty when lambda = 0.
std::optional<std::pair<CriticalPoint, CriticalPoint>> critical_points(
    const DispersionParams& p);

/// Translation of the positive critical point onto the lattice h Z:
/// shift = floor(xi0 / h), sigma_h = xi0 - h * shift in [0, h), r_h = sigma_h / h.
struct SemiclassicalFrame {
  double h = 0.0;
  CriticalPoint critical;
  long shift = 0;
  double sigma_h = 0.0;
  double r_h = 0.0;
  /// Second derivative of Phi(xi) = phi(xi + h shift) at sigma_h.
  double phi_pp_at_sigma = 0.0;
  /// phi(xi0), subtracted so that the translated symbol vanishes at sigma_h.
  double gauge = 0.0;

  /// Phi(xi) - gauge = phi(xi + h shift) - phi(xi0).
  double translated_symbol(double xi, const DispersionParams& p) const;
};

/// Requires h in (0, 1) and lambda > 0 (ParameterError otherwise).
SemiclassicalFrame semiclassical_translation(double h, const DispersionParams& p);

/// Pair (mu1, mu2) in [1/8, 7/8]^2 with mu1 + mu2 = 2r mod 1. Always returns
/// mu1 = mu2: {2r}/2 when {2r} >= 1/4, ({2r} + 1)/2 otherwise.
std::pair<double, double> mu_pair(double r);

}  // namespace kpi
