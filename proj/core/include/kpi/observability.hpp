#pragma once

// Control operators, observability ratios and time Gramians.
//
// For a control operator G and the free flow S(t), the observability
// quadratic form is  \int_0^T ||G S(t) u||^2 dt.  On exponentials it splits
// into a static Gram matrix M (the L^2 products of G e_m) and the scalar
// time factor
//
//     E(D, T) = \int_0^T e^{i t D} dt = (sin z + 2 i sin^2(z/2)) / D,  z = T D,
//
// so that O[m1, m2] = E(omega(m2) - omega(m1), T) M[m1, m2]. M is divided by
// (2 pi)^d so that Rayleigh quotients of coefficient vectors are exactly
// ratios of L^2 norms. All products are taken on the sampling grid, so the
// blocks agree with the physical-space quadrature to rounding.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "kpi/control_profile.hpp"
#include "kpi/dispersion.hpp"
#include "kpi/fourier.hpp"
#include "kpi/quadrature.hpp"

namespace kpi {

/// G h = g(x)(h - \int g h dx). The field may be 1D or 2D; the profile grid
/// must match the x axis.
SpectralField apply_vertical_control(const SpectralField& u, const ControlProfile& g);

/// G_par h = g(y)(h - \int g h dy); 2D fields only, profile on the y axis.
SpectralField apply_horizontal_control(const SpectralField& u, const ControlProfile& g);

/// Plain multiplication by g(x), used for the reduced-equation experiments.
SpectralField apply_multiplier(const SpectralField& u, const ControlProfile& g);

enum class ControlKind : std::uint32_t { Vertical = 0, Horizontal = 1, Multiplier = 2 };

struct Observation {
  ControlKind kind;
  ControlProfile profile;

  SpectralField apply(const SpectralField& u) const;
  /// Static Gram entry <G e_(k2,l2), G e_(k1,l1)> / (2 pi)^d, i.e. the
  /// (k1, l1) coefficient of G^2 e_(k2,l2) on the grid.
  cplx static_gram(int k1, int l1, int k2, int l2) const;
};

Observation vertical(const ControlProfile& g);
Observation horizontal(const ControlProfile& g);
Observation multiplier(const ControlProfile& g);

/// E(D, T), with a Taylor branch for |T D| < 1e-4.
cplx time_factor(double delta, double T);

/// The same integral evaluated by the composite 16-point Gauss-Legendre rule
/// with `panels` panels; an oracle for time_factor.
cplx time_factor_quadrature(double delta, double T, int panels);

struct Mode {
  int k;
  int l;
  friend bool operator==(const Mode&, const Mode&) = default;
};

enum class TimeKernel {
  /// \int_0^T S(-t) G^2 S(t) dt.
  Observability,
  /// \int_0^T S(t) G^2 S(-t) dt, the HUM operator.
  Hum,
};

struct GramianBlock {
  /// Transverse frequency for vertical blocks, x-frequency for horizontal.
  int fixed_index = 0;
  ControlKind orientation = ControlKind::Vertical;
  double horizon = 0.0;
  std::vector<Mode> modes;
  Eigen::MatrixXcd matrix;
};

/// Dense block over an arbitrary mode list. When `panels` is set, time factors
/// come from time_factor_quadrature instead of the closed form.
GramianBlock assemble_block(const std::vector<Mode>& modes, double T,
                            const Observation& obs, const DispersionParams& p,
                            TimeKernel kernel = TimeKernel::Observability,
                            std::optional<int> panels = std::nullopt);

/// Vertical block at transverse frequency l over k in [-K, K] \ {0}.
GramianBlock assemble_observability_gramian(double T, int K, int l, const ControlProfile& g,
                                            const DispersionParams& p);

/// Horizontal block at x-frequency k over l in [-L, L] (l = 0 included).
GramianBlock assemble_horizontal_gramian(double T, int k, int L, const ControlProfile& gy,
                                         const DispersionParams& p);

/// Window modes k in [-K, K] \ {0} at fixed l.
std::vector<Mode> x_window(int K, int l);

/// Throws NumericalConsistencyError unless the block is hermitian to
/// 1e-12 max-norm and PSD to -1e-10 trace / dim.
void check_block(const GramianBlock& block);

/// Ascending eigenvalues of a (checked) block.
Eigen::VectorXd block_eigenvalues(const GramianBlock& block);

struct ObservabilityEstimate {
  double lambda_min = 0.0;
  /// 1 / lambda_min, infinite when lambda_min <= 0.
  double constant = 0.0;
  std::size_t worst_block = 0;
  std::vector<double> block_minima;
};

/// Minimum over blocks of the smallest eigenvalue. Each block is checked.
ObservabilityEstimate observability_constant(const std::vector<GramianBlock>& blocks);

enum class RatioMethod { Gramian, Quadrature };

/// \int_0^T ||G S(t) u0||^2 dt / ||u0||^2. Quadrature panels default to an
/// automatic choice from the frequency spread of u0.
double observability_ratio(const SpectralField& u0, double T, const Observation& obs,
                           const DispersionParams& p, RatioMethod method,
                           int panels = 0);

/// Matrix-free quadrature of \int_0^T S(-+t) P_W G^2 S(+-t) dt through the
/// physical grid, P_W the restriction to the listed modes.
class QuadratureApplicator {
public:
  QuadratureApplicator(const TorusGrid& grid, std::vector<Mode> window, double T,
                       Observation obs, DispersionParams p, TimeKernel kernel,
                       int panels = 0);

  SpectralField apply(const SpectralField& v) const;
  int panels() const noexcept { return panels_; }

private:
  TorusGrid grid_;
  std::vector<Mode> window_;
  Observation obs_;
  DispersionParams p_;
  TimeKernel kernel_;
  int panels_;
  std::vector<QuadratureNode> nodes_;
  std::vector<double> freq_;
};

/// Dense block times a field restricted to the block's modes, scattered back.
SpectralField apply_block(const GramianBlock& block, const SpectralField& v);

/// Fraction of ||u||^2 carried by modes with |k| > 0.9 K.
double outer_window_fraction(const SpectralField& u, int K);

}  // namespace kpi
