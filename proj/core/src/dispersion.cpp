#include "kpi/dispersion.hpp"

#include <cmath>
#include <string>

#include "kpi/errors.hpp"

namespace kpi {

DispersionParams DispersionParams::full(double alpha) {
  DispersionParams p{alpha, 0.0, DispersionMode::Full2D};
  p.validate();
  return p;
}

DispersionParams DispersionParams::reduced(double alpha, double lambda) {
  DispersionParams p{alpha, lambda, DispersionMode::Reduced1D};
  p.validate();
  return p;
}

void DispersionParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterError("alpha must be positive, got " + std::to_string(alpha));
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("lambda must be nonnegative, got " + std::to_string(lambda));
  }
}

long double omega_extended(int k, int l, const DispersionParams& p) {
  if (k == 0) throw DomainError("omega is undefined at k = 0 (mean-zero modes only)");
  const long double kk = k;
  const long double transverse =
      p.mode == DispersionMode::Full2D ? static_cast<long double>(l) : p.lambda;
  const long double ak = std::fabs(kk);
  // Integer alpha is common; pow on long double is exact enough for it too.
  return std::pow(ak, static_cast<long double>(p.alpha)) * kk + transverse * transverse / kk;
}

double omega(int k, int l, const DispersionParams& p) {
  return static_cast<double>(omega_extended(k, l, p));
}

double symbol(double xi, const DispersionParams& p) {
  if (xi == 0.0) throw DomainError("symbol is singular at xi = 0");
  return std::pow(std::abs(xi), p.alpha) * xi + p.lambda * p.lambda / xi;
}

double group_velocity(double xi, const DispersionParams& p) {
  if (xi == 0.0) throw DomainError("group velocity is singular at xi = 0");
  return (p.alpha + 1.0) * std::pow(std::abs(xi), p.alpha) - p.lambda * p.lambda / (xi * xi);
}

double symbol_second_derivative(double xi, const DispersionParams& p) {
  if (xi == 0.0) throw DomainError("symbol is singular at xi = 0");
  const double sgn = xi > 0.0 ? 1.0 : -1.0;
  return p.alpha * (p.alpha + 1.0) * std::pow(std::abs(xi), p.alpha - 1.0) * sgn +
         2.0 * p.lambda * p.lambda / (xi * xi * xi);
}

std::optional<std::pair<CriticalPoint, CriticalPoint>> critical_points(
    const DispersionParams& p) {
  p.validate();
  if (p.lambda == 0.0) return std::nullopt;
  double xi = std::pow(p.lambda * p.lambda / (p.alpha + 1.0), 1.0 / (p.alpha + 2.0));
  // Newton polish on phi'(xi) = 0; phi'' > 0 on the positive axis.
  for (int it = 0; it < 4; ++it) {
    const double f = group_velocity(xi, p);
    const double df = symbol_second_derivative(xi, p);
    const double step = f / df;
    xi -= step;
    if (std::abs(step) <= 1e-17 * xi) break;
  }
  CriticalPoint plus;
  plus.xi0 = xi;
  plus.phi_pp = symbol_second_derivative(xi, p);
  plus.a0 = 0.5 * plus.phi_pp;
  CriticalPoint minus{-xi, -plus.phi_pp, -plus.a0};
  return std::make_pair(plus, minus);
}

double SemiclassicalFrame::translated_symbol(double xi, const DispersionParams& p) const {
  return symbol(xi + h * static_cast<double>(shift), p) - gauge;
}

SemiclassicalFrame semiclassical_translation(double h, const DispersionParams& p) {
  if (!(h > 0.0 && h < 1.0)) {
    throw ParameterError("semiclassical parameter h must lie in (0, 1), got " +
                         std::to_string(h));
  }
  auto cps = critical_points(p);
  if (!cps) throw ParameterError("semiclassical translation needs lambda > 0");
  SemiclassicalFrame f;
  f.h = h;
  f.critical = cps->first;
  const double ratio = f.critical.xi0 / h;
  f.shift = static_cast<long>(std::floor(ratio));
  f.r_h = ratio - static_cast<double>(f.shift);
  f.sigma_h = h * f.r_h;
  if (f.sigma_h >= h) {
    // Rounding at an exact lattice point.
    f.sigma_h = 0.0;
    f.r_h = 0.0;
    ++f.shift;
  }
  f.r_h = f.sigma_h / h;
  f.phi_pp_at_sigma = symbol_second_derivative(f.critical.xi0, p);
  f.gauge = symbol(f.critical.xi0, p);
  return f;
}

std::pair<double, double> mu_pair(double r) {
  if (!(r >= 0.0 && r < 1.0)) {
    throw ParameterError("mu_pair needs r in [0, 1), got " + std::to_string(r));
  }
  double f = 2.0 * r - std::floor(2.0 * r);
  if (f >= 1.0) f = 0.0;
  const double mu = f >= 0.25 ? 0.5 * f : 0.5 * (f + 1.0);
  return {mu, mu};
}

}  // namespace kpi
