#pragma once

// Torus grids, truncated Fourier coefficient fields and the discrete
// transforms between physical samples and coefficients.
//
// Conventions, shared by every module:
//   * T^d = R^d / (2 pi Z^d) with fundamental domain [-pi, pi)^d.
//   * Physical node j sits at x_j = -pi + 2 pi j / nx (same for y).
//   * Coefficients carry the (2 pi)^{-d} normalization
//         u_hat(k, l) = (2 pi)^{-d} \int u(x, y) e^{-i(kx + ly)} dx dy,
//     realized exactly by the trapezoid rule on the grid, so that
//         ||u||^2 = (2 pi)^d sum |u_hat|^2.
//   * The frequency window is k in [-nx/2, nx/2 - 1], l in [-ny/2, ny/2 - 1].
//     The lowest frequency of each axis is the unpaired Nyquist mode.

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace kpi {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class TorusGrid {
public:
  /// 1D grid; nx must be a power of two >= 4.
  static TorusGrid line(int nx);
  /// 2D grid; nx, ny must be powers of two >= 4.
  static TorusGrid plane(int nx, int ny);

  int dimension() const noexcept { return dim_; }
  int nx() const noexcept { return nx_; }
  /// 1 for a 1D grid.
  int ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

  int k_min() const noexcept { return -nx_ / 2; }
  int k_max() const noexcept { return nx_ / 2 - 1; }
  int l_min() const noexcept { return dim_ == 1 ? 0 : -ny_ / 2; }
  int l_max() const noexcept { return dim_ == 1 ? 0 : ny_ / 2 - 1; }

  bool contains(int k, int l = 0) const noexcept {
    return k >= k_min() && k <= k_max() && l >= l_min() && l <= l_max();
  }
  /// True for the unpaired Nyquist frequency of either axis.
  bool is_nyquist(int k, int l = 0) const noexcept {
    return k == k_min() || (dim_ == 2 && l == l_min());
  }

  double x(int j) const noexcept { return -kPi + kTwoPi * j / nx_; }
  double y(int j) const noexcept { return -kPi + kTwoPi * j / ny_; }

  /// Measure of one grid cell, (2 pi)^d / (nx ny).
  double cell_volume() const noexcept;
  /// (2 pi)^d.
  double volume() const noexcept;

  /// The 1D grid along x.
  TorusGrid x_axis() const { return line(nx_); }
  /// The 1D grid along y (2D grids only).
  TorusGrid y_axis() const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

private:
  TorusGrid(int dim, int nx, int ny) : dim_(dim), nx_(nx), ny_(ny) {}
  int dim_;
  int nx_;
  int ny_;
};

/// Truncated Fourier coefficients of a field on a torus grid.
class SpectralField {
public:
  explicit SpectralField(TorusGrid grid);
  SpectralField(TorusGrid grid, std::vector<cplx> coeffs);

  const TorusGrid& grid() const noexcept { return grid_; }

  std::size_t index(int k, int l = 0) const noexcept {
    return static_cast<std::size_t>(l - grid_.l_min()) * grid_.nx() +
           static_cast<std::size_t>(k - grid_.k_min());
  }
  cplx operator()(int k, int l = 0) const { return coeffs_[index(k, l)]; }
  cplx& operator()(int k, int l = 0) { return coeffs_[index(k, l)]; }

  std::span<const cplx> coefficients() const noexcept { return coeffs_; }
  std::span<cplx> coefficients() noexcept { return coeffs_; }

  /// L^2 norm, sqrt((2 pi)^d sum |c|^2).
  double norm() const;
  /// Largest |c(0, l)| over l.
  double max_zero_mode() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(cplx scale);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

  friend bool operator==(const SpectralField&, const SpectralField&) = default;

private:
  TorusGrid grid_;
  std::vector<cplx> coeffs_;
};

/// (u, v) = \int u conj(v), evaluated from coefficients.
cplx inner_product(const SpectralField& u, const SpectralField& v);
/// Largest coefficientwise |u - v|.
double max_abs_difference(const SpectralField& u, const SpectralField& v);

/// Physical samples (row-major, y slowest) to coefficients.
SpectralField forward_transform(std::span<const cplx> samples, const TorusGrid& grid);
/// Coefficients to physical samples.
std::vector<cplx> inverse_transform(const SpectralField& field);

/// Zeroes the k = 0 coefficient of every transverse frequency l.
SpectralField project_mean_zero(SpectralField field);

/// Zeroes the Nyquist coefficients (k = -nx/2, and l = -ny/2 in 2D).
SpectralField drop_nyquist(SpectralField field);

/// Throws ConstraintError naming the worst l when some |c(0, l)| exceeds
/// `relative_tol * ||field||` (absolute `relative_tol` for a zero field).
void require_mean_zero(const SpectralField& field, double relative_tol = 1e-14);

/// Smooth dyadic partition of unity on R \ {0}.
///
/// psi(xi) = chi(|xi|) - chi(|xi| / 2), where chi is a C^infinity step that
/// rises from 0 at 3/5 to 1 at 5/6. Hence supp psi = {3/5 <= |xi| <= 5/3},
/// psi = 1 on {5/6 <= |xi| <= 6/5}, and sum_n psi(2^n xi) telescopes to 1.
class LittlewoodPaley {
public:
  static constexpr double kRampStart = 3.0 / 5.0;
  static constexpr double kRampEnd = 5.0 / 6.0;

  /// C^infinity transition: 0 for t <= 0, 1 for t >= 1.
  static double ramp(double t);
  static double step(double s);

  double psi(double xi) const;
  /// psi_n(xi) = psi(2^n xi).
  double psi_n(int n, double xi) const;
  /// Enlargement psi_{-1} + psi_0 + psi_1, equal to 1 on supp psi.
  double enlarged(double xi) const;

  /// Inclusive range of n with psi_n(xi) possibly nonzero; empty for xi = 0.
  std::pair<int, int> contributing_blocks(double xi) const;
};

/// Multiplies coefficient (k, l) by psi_n(h k). Throws ParameterError for h <= 0.
SpectralField littlewood_paley_block(const SpectralField& field, int n, double h,
                                     const LittlewoodPaley& family = {});

/// ((2 pi)^d sum |k|^{2s} (1 + l^2)^s |c|^2)^{1/2}; the x-weight is homogeneous
/// so s < 0 requires a mean-zero field.
double sobolev_norm(const SpectralField& field, double s);

}  // namespace kpi
