#include "kpi/counterexamples.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kpi/control_profile.hpp"
#include "kpi/errors.hpp"
#include "kpi/observability.hpp"
#include "kpi/parallel.hpp"

namespace kpi {

std::vector<double> gaussian_coefficients(double eps, int k_first, int k_last) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  if (k_last < k_first) throw ParameterError("empty k range");
  // e^{-z^2/2} < 1e-300 beyond z = 38, so the upper limit is clipped there.
  const double upper = std::min(kPi / eps, 38.5);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k_last - k_first + 1));
  for (int k = k_first; k <= k_last; ++k) {
    const double freq = eps * std::abs(static_cast<double>(k));
    auto f = [freq](double z) { return std::exp(-0.5 * z * z) * std::cos(freq * z); };
    double err = 0.0;
    // Split at the oscillation scale so the adaptive rule sees few periods per piece.
    const int pieces = std::max(1, static_cast<int>(std::ceil(freq * upper / 20.0)));
    double sum = 0.0;
    for (int i = 0; i < pieces; ++i) {
      const double a = upper * i / pieces;
      const double b = upper * (i + 1) / pieces;
      sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15,
                                                                          1e-14, &err);
    }
    out.push_back(std::sqrt(eps) / kTwoPi * 2.0 * sum);
  }
  return out;
}

void PacketParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("packet alpha must lie in (0, 2]");
  if (!(b > 0.0 && B > b)) throw ParameterError("packet cutoff needs 0 < b < B");
  if (!(beta > 0.0 && beta < kPi)) throw ParameterError("beta must lie in (0, pi)");
}

double PacketParams::h(int n) const { return std::ldexp(1.0, -n); }

double PacketParams::h_tilde(int n) const {
  return alpha < 1.0 ? std::pow(h(n), 1.0 - alpha) : std::sqrt(h(n));
}

double PacketParams::eps(int n) const { return std::sqrt(h_tilde(n)); }

int PacketParams::half_width(int n) const {
  return static_cast<int>(std::ceil(B / h_tilde(n)));
}

double PacketParams::cutoff(double xi) const {
  return 1.0 - LittlewoodPaley::ramp((std::abs(xi) - b) / (B - b));
}

DispersionParams packet_symbol(double alpha) { return DispersionParams::reduced(alpha, 1.0); }

namespace {

long critical_shift(double h, const DispersionParams& p) {
  auto cps = critical_points(p);
  if (!cps) throw ParameterError("modulation needs lambda > 0");
  return static_cast<long>(std::floor(cps->first.xi0 / h));
}

}  // namespace

int packet_grid_size(const PacketParams& params, int n) {
  const long s = critical_shift(params.h(n), packet_symbol(params.alpha));
  const long K = params.half_width(n);
  int nx = 64;
  while (nx / 2 - 1 < s + K + 1 || nx < 8 * (2 * K + 1)) nx *= 2;
  return nx;
}

SpectralField packet_initial_data(const PacketParams& params, int n, const TorusGrid& grid) {
  params.validate();
  if (grid.dimension() != 1) throw DimensionError("packets live on 1D grids");
  const double ht = params.h_tilde(n);
  const double eps = params.eps(n);
  const int K = params.half_width(n);
  if (K > grid.k_max()) {
    throw DimensionError("packet support |k| <= " + std::to_string(K) +
                         " does not fit the grid; need nx >= " +
                         std::to_string(std::bit_ceil(static_cast<unsigned>(2 * K + 2))));
  }
  const std::vector<double> g = gaussian_coefficients(eps, -K, K);
  SpectralField v(grid);
  for (int k = -K; k <= K; ++k) v(k) = g[k + K] * params.cutoff(ht * k);
  return v;
}

SpectralField modulated_packet(const SpectralField& v, double h, const DispersionParams& p) {
  const TorusGrid& grid = v.grid();
  if (grid.dimension() != 1) throw DimensionError("modulation acts on 1D fields");
  const long s = critical_shift(h, p);
  SpectralField out(grid);
  for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
    if (v(k) == cplx(0.0)) continue;
    const long target = k + s;
    if (target < grid.k_min() + 1 || target > grid.k_max()) {
      throw DimensionError("modulated mode " + std::to_string(target) +
                           " leaves the grid window");
    }
    out(static_cast<int>(target)) = v(k);
  }
  return out;
}

double h_from_transverse(int N, double alpha) {
  if (N < 1) throw ParameterError("transverse frequency N must be a positive integer");
  return std::pow(static_cast<double>(N), -2.0 / (alpha + 2.0));
}

SpectralField embed_2d_integer(const SpectralField& w, int N) {
  if (w.grid().dimension() != 1) throw DimensionError("embed_2d takes a 1D field");
  if (N < 1) throw ParameterError("transverse frequency N must be a positive integer");
  const int ny = std::max(4, static_cast<int>(std::bit_ceil(static_cast<unsigned>(2 * N + 2))));
  const TorusGrid grid = TorusGrid::plane(w.grid().nx(), ny);
  SpectralField out(grid);
  for (int k = grid.k_min(); k <= grid.k_max(); ++k) out(k, N) = w(k);
  return out;
}

SpectralField embed_2d(const SpectralField& w, double h, double alpha) {
  if (!(h > 0.0 && h < 1.0)) throw ParameterError("h must lie in (0, 1)");
  const double n_real = std::pow(h, -(alpha + 2.0) / 2.0);
  const double n_round = std::round(n_real);
  if (std::abs(n_real - n_round) > 1e-9 * n_real) {
    throw ParameterError("h^{-(alpha+2)/2} = " + std::to_string(n_real) +
                         " is not an integer; choose N first and set h = N^{-2/(alpha+2)}");
  }
  return embed_2d_integer(w, static_cast<int>(n_round));
}

SpectralField invisible_solution(int k, const TorusGrid& grid) {
  if (k == 0) throw DomainError("invisible solution needs k != 0");
  if (grid.dimension() != 2) throw DimensionError("invisible solutions live on 2D grids");
  if (!grid.contains(k, 0) || grid.is_nyquist(k, 0)) throw DimensionError("k outside the grid");
  SpectralField u(grid);
  u(k, 0) = 1.0;
  return u;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ParameterError("slope fit needs two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

DichotomyResult dichotomy_experiment(const PacketParams& params, double T, int n_first,
                                     int n_last) {
  params.validate();
  if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
  if (n_last < n_first || n_first < 1) throw ParameterError("invalid n range");
  const std::size_t count = static_cast<std::size_t>(n_last - n_first + 1);
  DichotomyResult result;
  result.alpha = params.alpha;
  result.horizon = T;
  result.rows.resize(count);
  const DispersionParams symbol_p = packet_symbol(params.alpha);
  parallel_for(count, [&](std::size_t i) {
    const int n = n_first + static_cast<int>(i);
    const double h = params.h(n);
    const int nx = packet_grid_size(params, n);
    const TorusGrid grid = TorusGrid::line(nx);
    const SpectralField v = packet_initial_data(params, n, grid);
    const SpectralField w = modulated_packet(v, h, symbol_p);
    const double lambda = std::pow(h, -(params.alpha + 2.0) / 2.0);
    const DispersionParams p = DispersionParams::reduced(params.alpha, lambda);
    const ControlProfile g = exterior_profile(params.beta, grid);
    DichotomyRow row;
    row.n = n;
    row.h = h;
    row.eps = params.eps(n);
    row.grid_nx = nx;
    row.mass = v.norm() * v.norm();
    row.ratio = observability_ratio(w, T, vertical(g), p, RatioMethod::Gramian);
    result.rows[i] = row;
  });
  std::vector<double> le, lr;
  result.strictly_decreasing = true;
  double lo = result.rows.front().ratio;
  for (std::size_t i = 0; i < count; ++i) {
    le.push_back(std::log(result.rows[i].eps));
    lr.push_back(std::log(result.rows[i].ratio));
    if (i > 0 && !(result.rows[i].ratio < result.rows[i - 1].ratio)) {
      result.strictly_decreasing = false;
    }
    lo = std::min(lo, result.rows[i].ratio);
  }
  result.slope = count >= 2 ? fitted_slope(le, lr) : 0.0;
  result.decay = result.rows.back().ratio / result.rows.front().ratio;
  result.floor = lo / result.rows.front().ratio;
  return result;
}

}  // namespace kpi
