#pragma once

// Exact diagonal evolution u_hat(t) = e^{i t omega} u_hat(0) and an
// independent RK4 oracle for it.

#include "kpi/dispersion.hpp"
#include "kpi/fourier.hpp"

namespace kpi {

/// Exact evolution. A 1D field needs Reduced1D parameters, a 2D field Full2D.
/// Throws ConstraintError when the field carries x-mean. Nyquist modes are
/// zeroed in the result.
SpectralField evolve(const SpectralField& u0, double t, const DispersionParams& p);

/// 2D evolution assembled slice by slice from the reduced equation with
/// lambda = |l|.
SpectralField evolve_modes(const SpectralField& u0, double t, double alpha);

/// Semiclassical evolution of a 1D field in the translated frame:
/// coefficient k picks up e^{i t (Phi(h k) - Phi(sigma_h)) / h^{1 + alpha}},
/// Phi(xi) = phi(xi + h shift). Here p.lambda is the parameter of phi; the
/// transverse frequency of the underlying reduced equation is
/// p.lambda * h^{-(alpha + 2) / 2}. The singular mode k = -shift must vanish.
SpectralField evolve_semiclassical(const SpectralField& w0, double t, double h,
                                   const DispersionParams& p);

/// Classical RK4 for du/dt = i omega u with `steps` uniform steps.
SpectralField rk4_reference_evolve(const SpectralField& u0, double t, int steps,
                                   const DispersionParams& p);

/// Frequency of each coefficient in storage order (0 at k = 0 and Nyquist).
std::vector<double> frequency_table(const TorusGrid& grid, const DispersionParams& p);

/// e^{i t w} with t w reduced modulo 2 pi in extended precision.
cplx unit_phase(long double t, long double w);

}  // namespace kpi
