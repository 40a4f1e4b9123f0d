#include "kpi/spectral_constant.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "kpi/errors.hpp"
#include "profile_shape.hpp"

namespace kpi {

namespace {

using boost::multiprecision::mpfr_float;

struct Complex {
  mpfr_float re;
  mpfr_float im;
};

constexpr std::array<int, 5> kDigitLadder{50, 100, 200, 400, 800};

// Restores the default precision on scope exit.
class PrecisionScope {
public:
  explicit PrecisionScope(int digits) : saved_(mpfr_float::default_precision()) {
    mpfr_float::default_precision(digits);
  }
  ~PrecisionScope() { mpfr_float::default_precision(saved_); }

private:
  unsigned saved_;
};

// R[m] = \int g^2 e^{-imx} dx for |m| <= 2 m0, on the grid.
std::vector<Complex> g2_moments(const ControlProfile& g, int m0) {
  const int n = g.grid().nx();
  const mpfr_float two_pi = 8 * boost::multiprecision::atan(mpfr_float(1));
  const mpfr_float cell = two_pi / n;

  std::vector<mpfr_float> g2(n);
  mpfr_float total = 0;
  std::vector<int> support;
  for (int j = 0; j < n; ++j) {
    const mpfr_float x = -two_pi / 2 + two_pi * j / n;
    mpfr_float v = 0;
    for (const Interval& iv : g.support()) v += detail::bump<mpfr_float>(g.kind(), x, iv.a, iv.b);
    g2[j] = v;
    total += v;
    if (v != 0) support.push_back(j);
  }
  const mpfr_float scale = 1 / (cell * total);
  for (int j : support) {
    const mpfr_float v = g2[j] * scale;
    g2[j] = v * v;
  }

  std::vector<mpfr_float> c(n), s(n);
  for (int m = 0; m < n; ++m) {
    c[m] = boost::multiprecision::cos(two_pi * m / n);
    s[m] = boost::multiprecision::sin(two_pi * m / n);
  }
  std::vector<Complex> r(4 * m0 + 1);
  for (int m = -2 * m0; m <= 2 * m0; ++m) {
    mpfr_float re = 0, im = 0;
    for (int j : support) {
      const int idx = static_cast<int>(((static_cast<long>(m) * j) % n + n) % n);
      re += g2[j] * c[idx];
      im -= g2[j] * s[idx];
    }
    // e^{-imx_j} = (-1)^m e^{-2 pi i m j / n} since x_j = -pi + 2 pi j / n.
    const mpfr_float sign = (m % 2 == 0) ? 1 : -1;
    r[m + 2 * m0] = {sign * cell * re, sign * cell * im};
  }
  return r;
}

// Inverse of the hermitian positive definite matrix A (row-major n x n) via
// Cholesky. Returns false when a pivot is not positive.
bool hpd_inverse(std::vector<Complex>& a, int n, std::vector<Complex>& inv) {
  auto at = [&](std::vector<Complex>& m, int i, int j) -> Complex& { return m[i * n + j]; };
  // In-place lower factor L with A = L L^H.
  for (int j = 0; j < n; ++j) {
    mpfr_float d = at(a, j, j).re;
    for (int k = 0; k < j; ++k) d -= at(a, j, k).re * at(a, j, k).re + at(a, j, k).im * at(a, j, k).im;
    if (!(d > 0)) return false;
    const mpfr_float ljj = boost::multiprecision::sqrt(d);
    at(a, j, j) = {ljj, mpfr_float(0)};
    for (int i = j + 1; i < n; ++i) {
      mpfr_float re = at(a, i, j).re, im = at(a, i, j).im;
      for (int k = 0; k < j; ++k) {
        // A[i,j] - sum_k L[i,k] conj(L[j,k])
        const Complex& x = at(a, i, k);
        const Complex& y = at(a, j, k);
        re -= x.re * y.re + x.im * y.im;
        im -= x.im * y.re - x.re * y.im;
      }
      at(a, i, j) = {re / ljj, im / ljj};
    }
  }
  // W = L^{-1}, lower triangular.
  std::vector<Complex> w(static_cast<std::size_t>(n) * n, Complex{0, 0});
  for (int j = 0; j < n; ++j) {
    at(w, j, j) = {1 / at(a, j, j).re, mpfr_float(0)};
    for (int i = j + 1; i < n; ++i) {
      mpfr_float re = 0, im = 0;
      for (int k = j; k < i; ++k) {
        const Complex& x = at(a, i, k);
        const Complex& y = at(w, k, j);
        re += x.re * y.re - x.im * y.im;
        im += x.re * y.im + x.im * y.re;
      }
      const mpfr_float d = at(a, i, i).re;
      at(w, i, j) = {-re / d, -im / d};
    }
  }
  // A^{-1} = W^H W.
  inv.assign(static_cast<std::size_t>(n) * n, Complex{0, 0});
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      mpfr_float re = 0, im = 0;
      for (int k = j; k < n; ++k) {
        // conj(W[k,i]) W[k,j]
        const Complex& x = at(w, k, i);
        const Complex& y = at(w, k, j);
        re += x.re * y.re + x.im * y.im;
        im += x.re * y.im - x.im * y.re;
      }
      at(inv, i, j) = {re, im};
      at(inv, j, i) = {re, -im};
    }
  }
  return true;
}

void check_order(const ControlProfile& g, int m0) {
  if (m0 < 0) throw ParameterError("m0 must be nonnegative");
  if (m0 > g.grid().k_max()) {
    throw ParameterError("m0 = " + std::to_string(m0) + " exceeds the grid window");
  }
}

}  // namespace

Eigen::MatrixXcd spectral_gram(const ControlProfile& g, int m0) {
  check_order(g, m0);
  const int n = 2 * m0 + 1;
  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m(j, k) = kTwoPi * g.g2_hat(j - k);
  return m;
}

SpectralConstant spectral_constant(const ControlProfile& g, int m0) {
  check_order(g, m0);
  const int n = 2 * m0 + 1;
  for (int digits : kDigitLadder) {
    PrecisionScope scope(digits);
    const std::vector<Complex> r = g2_moments(g, m0);
    std::vector<Complex> a(static_cast<std::size_t>(n) * n);
    double norm_m = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        a[j * n + k] = r[j - k + 2 * m0];
        norm_m = std::max(norm_m, std::abs(a[j * n + k].re.convert_to<double>()) +
                                      std::abs(a[j * n + k].im.convert_to<double>()));
      }
    }
    std::vector<Complex> inv;
    if (!hpd_inverse(a, n, inv)) continue;
    Eigen::MatrixXcd mi(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        mi(j, k) = {inv[j * n + k].re.convert_to<double>(), inv[j * n + k].im.convert_to<double>()};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mi);
    if (es.info() != Eigen::Success) continue;
    const double kappa = es.eigenvalues()(n - 1);
    // Forward error of the inverse is about kappa ||M|| n 10^-digits relative.
    const double rel = kappa * norm_m * n * n * std::pow(10.0, -digits);
    if (!(kappa > 0.0) || !std::isfinite(kappa) || rel > 1e-17) continue;
    SpectralConstant out;
    out.m0 = m0;
    out.kappa = kappa;
    out.lambda_min = 1.0 / kappa;
    out.digits = digits;
    out.extremal = es.eigenvectors().col(n - 1);
    return out;
  }
  throw NumericalConsistencyError("spectral constant is infinite or unresolvable at m0 = " +
                                  std::to_string(m0) + " (Gram matrix numerically singular)");
}

}  // namespace kpi
