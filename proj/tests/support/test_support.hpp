#pragma once

#include <cmath>
#include <vector>

#include "kpi/fourier.hpp"
#include "kpi/observability.hpp"
#include "kpi/random_fields.hpp"

namespace kpi::test {

inline SpectralField single_mode(const TorusGrid& grid, int k, int l = 0, cplx c = 1.0) {
  SpectralField u(grid);
  u(k, l) = c;
  return u;
}

/// Direct O(n^2) DFT with the (2pi)^{-d} convention, used as an oracle.
inline SpectralField direct_dft(const std::vector<cplx>& samples, const TorusGrid& grid) {
  SpectralField out(grid);
  const int ny = grid.dimension() == 2 ? grid.ny() : 1;
  const double scale = 1.0 / (static_cast<double>(grid.nx()) * ny);
  for (int l = grid.l_min(); l <= grid.l_max(); ++l)
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
      cplx acc = 0.0;
      for (int jy = 0; jy < ny; ++jy)
        for (int jx = 0; jx < grid.nx(); ++jx) {
          const double y = grid.dimension() == 2 ? grid.y(jy) : 0.0;
          acc += samples[static_cast<std::size_t>(jy) * grid.nx() + jx] *
                 std::polar(1.0, -(k * grid.x(jx) + l * y));
        }
      out(k, l) = acc * scale;
    }
  return out;
}

/// Physical-space L^2 norm by the trapezoid rule.
inline double physical_norm(const SpectralField& u) {
  const std::vector<cplx> s = inverse_transform(u);
  double acc = 0.0;
  for (const cplx& z : s) acc += std::norm(z);
  return std::sqrt(acc * u.grid().cell_volume());
}

/// Dense block action summed over every block of a window.
inline SpectralField dense_apply(const std::vector<GramianBlock>& blocks, const SpectralField& v) {
  SpectralField out(v.grid());
  for (const GramianBlock& b : blocks) out += apply_block(b, v);
  return out;
}

inline double relative_difference(const SpectralField& a, const SpectralField& b) {
  return (a - b).norm() / std::max(a.norm(), 1e-300);
}

}  // namespace kpi::test
