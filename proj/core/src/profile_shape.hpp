#pragma once

// Bump shapes shared by the double-precision profile and the multiprecision
// spectral-constant path. Real must support exp, sin, comparison.

#include <cmath>

#include "kpi/control_profile.hpp"

namespace kpi::detail {

template <class Real>
Real bump(ProfileKind kind, const Real& x, double a, double b) {
  using std::exp;
  using std::sin;
  if (!(x > a) || !(x < b)) return Real(0);
  if (kind == ProfileKind::SmoothExp) {
    const Real s = (2 * x - (a + b)) / (b - a);
    const Real q = 1 - s * s;
    if (!(q > 0)) return Real(0);
    return exp(-1 / q);
  }
  // pi as Real: 4 atan(1) keeps the multiprecision path exact.
  using std::atan;
  const Real pi = 4 * atan(Real(1));
  const Real s = sin(pi * (x - a) / (b - a));
  const Real s2 = s * s;
  return s2 * s2;
}

}  // namespace kpi::detail
