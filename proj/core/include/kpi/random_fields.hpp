#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kpi/fourier.hpp"
#include "kpi/observability.hpp"

namespace kpi {

using Rng = std::mt19937_64;

/// Standard normal draw by Box-Muller on 53-bit uniforms, so sequences are
/// identical across standard libraries.
double standard_normal(Rng& rng);

/// Unit-norm field with independent complex normal coefficients on the listed
/// modes and zero elsewhere.
SpectralField random_field(const TorusGrid& grid, const std::vector<Mode>& modes, Rng& rng);

/// Unit-norm field on |k| <= K (k != 0), |l| <= L, Nyquist excluded. K or L
/// below zero means the full window.
SpectralField random_field(const TorusGrid& grid, Rng& rng, int K = -1, int L = -1);

}  // namespace kpi
