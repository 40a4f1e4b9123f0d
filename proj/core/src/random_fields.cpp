#include "kpi/random_fields.hpp"

#include <cmath>

#include "kpi/errors.hpp"

namespace kpi {

namespace {
double uniform53(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
}  // namespace

double standard_normal(Rng& rng) {
  double u1 = uniform53(rng);
  while (u1 <= 0.0) u1 = uniform53(rng);
  const double u2 = uniform53(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

SpectralField random_field(const TorusGrid& grid, const std::vector<Mode>& modes, Rng& rng) {
  SpectralField u(grid);
  for (const Mode& m : modes) {
    if (!grid.contains(m.k, m.l)) throw DimensionError("random field mode outside the grid");
    const double re = standard_normal(rng);
    const double im = standard_normal(rng);
    u(m.k, m.l) = cplx(re, im);
  }
  u = drop_nyquist(project_mean_zero(std::move(u)));
  const double n = u.norm();
  if (n > 0.0) u *= 1.0 / n;
  return u;
}

SpectralField random_field(const TorusGrid& grid, Rng& rng, int K, int L) {
  const int kmax = K < 0 ? grid.k_max() : K;
  const int lmax = L < 0 ? grid.l_max() : L;
  if (kmax > grid.k_max() || (grid.dimension() == 2 && lmax > grid.l_max())) {
    throw DimensionError("random field window exceeds the grid");
  }
  std::vector<Mode> modes;
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) {
    if (std::abs(l) > lmax) continue;
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
      if (k == 0 || std::abs(k) > kmax || grid.is_nyquist(k, l)) continue;
      modes.push_back({k, l});
    }
  }
  return random_field(grid, modes, rng);
}

}  // namespace kpi
