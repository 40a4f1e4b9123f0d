#pragma once

// Wave packets concentrated at the critical frequency of the reduced symbol,
// the 2D embedding of reduced solutions, and the invisible solutions of
// horizontal control.

#include <vector>

#include "kpi/dispersion.hpp"
#include "kpi/fourier.hpp"

namespace kpi {

/// g^eps(k) = (sqrt(eps) / 2 pi) \int_{-pi/eps}^{pi/eps} e^{-z^2/2} e^{-i eps k z} dz
/// for k = k_first .. k_last, by adaptive Gauss-Kronrod quadrature.
std::vector<double> gaussian_coefficients(double eps, int k_first, int k_last);

struct PacketParams {
  double alpha = 0.5;
  /// Cutoff chi(xi) is 1 for |xi| <= b and 0 for |xi| >= B.
  double b = 0.5;
  double B = 1.0;
  /// Observation region (-pi, -beta) U (beta, pi).
  double beta = kPi / 4.0;

  void validate() const;
  /// h_n = 2^-n.
  double h(int n) const;
  /// h^{1 - alpha} for alpha < 1, h^{1/2} otherwise.
  double h_tilde(int n) const;
  /// sqrt(h_tilde).
  double eps(int n) const;
  /// Half-width ceil(B / h_tilde) of the packet's frequency support.
  int half_width(int n) const;
  /// Smooth cutoff, C^infinity, even.
  double cutoff(double xi) const;
};

/// Semiclassical parameters of the reduced symbol used by the packets:
/// phi(xi) = |xi|^alpha xi + 1 / xi.
DispersionParams packet_symbol(double alpha);

/// Grid size for packet n: the modulated support must fit with room for G.
int packet_grid_size(const PacketParams& params, int n);

/// v_{n,0} = sum_k g^{eps_n}(k) chi(h_tilde k) e^{ikx}. DimensionError when the
/// support does not fit the grid window.
SpectralField packet_initial_data(const PacketParams& params, int n, const TorusGrid& grid);

/// Coefficient shift k -> k + floor(xi0 / h), xi0 the critical point of p.
SpectralField modulated_packet(const SpectralField& v, double h, const DispersionParams& p);

/// h = N^{-2 / (alpha + 2)}, the semiclassical parameter of transverse frequency N.
double h_from_transverse(int N, double alpha);

/// Places a 1D field on the transverse frequency l = N = h^{-(alpha+2)/2};
/// ParameterError unless N is a positive integer (choose N first).
SpectralField embed_2d(const SpectralField& w, double h, double alpha);
SpectralField embed_2d_integer(const SpectralField& w, int N);

/// e^{ikx} on a 2D grid, annihilated by horizontal control.
SpectralField invisible_solution(int k, const TorusGrid& grid);

struct DichotomyRow {
  int n = 0;
  double h = 0.0;
  double eps = 0.0;
  double ratio = 0.0;
  int grid_nx = 0;
  /// ||v_{n,0}||^2.
  double mass = 0.0;
};

struct DichotomyResult {
  double alpha = 0.0;
  double horizon = 0.0;
  std::vector<DichotomyRow> rows;
  /// Least-squares slope of log(ratio) against log(eps).
  double slope = 0.0;
  bool strictly_decreasing = false;
  /// ratio(last) / ratio(first).
  double decay = 0.0;
  /// min ratio / ratio(first).
  double floor = 0.0;
};

/// For each n: packet, modulation to the critical frequency, reduced
/// evolution with lambda = h^{-(alpha+2)/2}, and the Gramian observability
/// ratio over (0, T) for g supported in the observation region.
DichotomyResult dichotomy_experiment(const PacketParams& params, double T, int n_first,
                                     int n_last);

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kpi
