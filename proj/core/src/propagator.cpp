#include "kpi/propagator.hpp"

#include <cmath>
#include <string>

#include "kpi/errors.hpp"

namespace kpi {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;

void check_mode(const SpectralField& u, const DispersionParams& p) {
  p.validate();
  const int dim = u.grid().dimension();
  if (dim == 1 && p.mode != DispersionMode::Reduced1D) {
    throw ParameterError("a 1D field evolves under the reduced equation (mode Reduced1D)");
  }
  if (dim == 2 && p.mode != DispersionMode::Full2D) {
    throw ParameterError("a 2D field evolves under the full multiplier (mode Full2D)");
  }
}

}  // namespace

cplx unit_phase(long double t, long double w) {
  long double theta = std::fmod(t * w, kTwoPiL);
  return {static_cast<double>(std::cos(theta)), static_cast<double>(std::sin(theta))};
}

std::vector<double> frequency_table(const TorusGrid& grid, const DispersionParams& p) {
  std::vector<double> w(grid.size(), 0.0);
  SpectralField probe(grid);
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) {
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
      if (k == 0 || grid.is_nyquist(k, l)) continue;
      w[probe.index(k, l)] = omega(k, l, p);
    }
  }
  return w;
}

SpectralField evolve(const SpectralField& u0, double t, const DispersionParams& p) {
  check_mode(u0, p);
  require_mean_zero(u0);
  const TorusGrid& grid = u0.grid();
  SpectralField out(grid);
  if (t == 0.0) {
    out = drop_nyquist(project_mean_zero(u0));
    return out;
  }
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) {
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
      if (k == 0 || grid.is_nyquist(k, l)) continue;
      out(k, l) = unit_phase(t, omega_extended(k, l, p)) * u0(k, l);
    }
  }
  return out;
}

SpectralField evolve_modes(const SpectralField& u0, double t, double alpha) {
  const TorusGrid& grid = u0.grid();
  if (grid.dimension() != 2) throw DimensionError("evolve_modes needs a 2D field");
  require_mean_zero(u0);
  SpectralField out(grid);
  const TorusGrid line = grid.x_axis();
  for (int l = grid.l_min() + 1; l <= grid.l_max(); ++l) {
    SpectralField slice(line);
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) slice(k) = u0(k, l);
    slice(0) = 0.0;
    const auto p = DispersionParams::reduced(alpha, std::abs(static_cast<double>(l)));
    const SpectralField evolved = evolve(slice, t, p);
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) out(k, l) = evolved(k);
  }
  return out;
}

SpectralField evolve_semiclassical(const SpectralField& w0, double t, double h,
                                   const DispersionParams& p) {
  if (w0.grid().dimension() != 1) {
    throw DimensionError("semiclassical evolution acts on 1D fields");
  }
  const SemiclassicalFrame frame = semiclassical_translation(h, p);
  const TorusGrid& grid = w0.grid();
  const long singular = -frame.shift;
  if (singular >= grid.k_min() && singular <= grid.k_max()) {
    const double mass = std::sqrt(grid.volume()) * std::abs(w0(static_cast<int>(singular)));
    if (mass > 1e-14 * w0.norm()) {
      throw ConstraintError("field has mass " + std::to_string(mass) +
                            " at the translated zero frequency k = " +
                            std::to_string(singular));
    }
  }
  SpectralField out(grid);
  const long double hl = h;
  const long double scale = std::pow(hl, -static_cast<long double>(p.alpha) - 1.0L);
  const long double lam2 = static_cast<long double>(p.lambda) * p.lambda;
  const long double gauge = frame.gauge;
  for (int k = grid.k_min() + 1; k <= grid.k_max(); ++k) {
    if (k == singular) continue;
    const long double xi = hl * (static_cast<long double>(k) + frame.shift);
    const long double phi =
        std::pow(std::fabs(xi), static_cast<long double>(p.alpha)) * xi + lam2 / xi;
    out(k) = unit_phase(t, (phi - gauge) * scale) * w0(k);
  }
  return out;
}

SpectralField rk4_reference_evolve(const SpectralField& u0, double t, int steps,
                                   const DispersionParams& p) {
  if (steps < 1) throw ParameterError("rk4_reference_evolve needs steps >= 1");
  check_mode(u0, p);
  require_mean_zero(u0);
  const TorusGrid& grid = u0.grid();
  const std::vector<double> w = frequency_table(grid, p);
  SpectralField u = drop_nyquist(project_mean_zero(u0));
  auto c = u.coefficients();
  const std::size_t n = c.size();
  std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double dt = t / steps;
  const cplx I(0.0, 1.0);
  auto rhs = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = I * w[i] * in[i];
  };
  std::vector<cplx> y(c.begin(), c.end());
  for (int s = 0; s < steps; ++s) {
    rhs(y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return SpectralField(grid, std::move(y));
}

}  // namespace kpi
