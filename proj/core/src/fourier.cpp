#include "kpi/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "kpi/errors.hpp"

namespace kpi {

namespace {

void require_power_of_two(int n, const char* axis) {
  if (n < 4 || !std::has_single_bit(static_cast<unsigned>(n))) {
    throw DimensionError(std::string("grid size along ") + axis +
                         " must be a power of two >= 4, got " + std::to_string(n));
  }
}

// (-1)^k for the shift x_0 = -pi.
inline double parity(int k) { return (k & 1) ? -1.0 : 1.0; }

inline int wrap(int k, int n) { return ((k % n) + n) % n; }

// FFTW plans keyed by shape and direction. The planner is not thread-safe,
// execution on private buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
public:
  FftPlan(int nx, int ny, int dim, int sign) : n_(static_cast<std::size_t>(nx) * ny) {
    in_ = fftw_alloc_complex(n_);
    out_ = fftw_alloc_complex(n_);
    std::lock_guard lock(planner_mutex());
    if (dim == 1) {
      plan_ = fftw_plan_dft_1d(nx, in_, out_, sign, FFTW_ESTIMATE);
    } else {
      plan_ = fftw_plan_dft_2d(ny, nx, in_, out_, sign, FFTW_ESTIMATE);
    }
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::span<cplx> input() { return {reinterpret_cast<cplx*>(in_), n_}; }
  std::span<const cplx> output() const { return {reinterpret_cast<const cplx*>(out_), n_}; }
  void execute() { fftw_execute(plan_); }

private:
  std::size_t n_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

FftPlan& cached_plan(const TorusGrid& grid, int sign) {
  thread_local std::map<std::tuple<int, int, int>, std::unique_ptr<FftPlan>> cache;
  auto key = std::make_tuple(grid.nx(), grid.ny(), sign);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache
             .emplace(key, std::make_unique<FftPlan>(grid.nx(), grid.ny(),
                                                     grid.dimension(), sign))
             .first;
  }
  return *it->second;
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw DimensionError("fields live on different grids");
}

}  // namespace

// --- TorusGrid -------------------------------------------------------------

TorusGrid TorusGrid::line(int nx) {
  require_power_of_two(nx, "x");
  return TorusGrid(1, nx, 1);
}

TorusGrid TorusGrid::plane(int nx, int ny) {
  require_power_of_two(nx, "x");
  require_power_of_two(ny, "y");
  return TorusGrid(2, nx, ny);
}

double TorusGrid::volume() const noexcept {
  return dim_ == 1 ? kTwoPi : kTwoPi * kTwoPi;
}

double TorusGrid::cell_volume() const noexcept {
  return volume() / static_cast<double>(size());
}

TorusGrid TorusGrid::y_axis() const {
  if (dim_ != 2) throw DimensionError("a 1D grid has no y axis");
  return line(ny_);
}

// --- SpectralField ---------------------------------------------------------

SpectralField::SpectralField(TorusGrid grid) : grid_(grid), coeffs_(grid.size()) {}

SpectralField::SpectralField(TorusGrid grid, std::vector<cplx> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw DimensionError("coefficient array has " + std::to_string(coeffs_.size()) +
                         " entries, grid expects " + std::to_string(grid_.size()));
  }
}

double SpectralField::norm() const {
  double s = 0.0;
  for (const cplx& c : coeffs_) s += std::norm(c);
  return std::sqrt(grid_.volume() * s);
}

double SpectralField::max_zero_mode() const {
  double m = 0.0;
  for (int l = grid_.l_min(); l <= grid_.l_max(); ++l) m = std::max(m, std::abs((*this)(0, l)));
  return m;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx scale) {
  for (cplx& c : coeffs_) c *= scale;
  return *this;
}

cplx inner_product(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v);
  cplx s = 0.0;
  auto a = u.coefficients();
  auto b = v.coefficients();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return u.grid().volume() * s;
}

double max_abs_difference(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v);
  double m = 0.0;
  auto a = u.coefficients();
  auto b = v.coefficients();
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// --- transforms ------------------------------------------------------------

SpectralField forward_transform(std::span<const cplx> samples, const TorusGrid& grid) {
  if (samples.size() != grid.size()) {
    throw DimensionError("sample array has " + std::to_string(samples.size()) +
                         " entries, grid expects " + std::to_string(grid.size()));
  }
  FftPlan& plan = cached_plan(grid, FFTW_FORWARD);
  std::copy(samples.begin(), samples.end(), plan.input().begin());
  plan.execute();
  auto out = plan.output();

  SpectralField field(grid);
  const double scale = 1.0 / static_cast<double>(grid.size());
  const int nx = grid.nx();
  const int ny = grid.ny();
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) {
    const std::size_t row = static_cast<std::size_t>(wrap(l, ny)) * nx;
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
      field(k, l) = parity(k + l) * scale * out[row + wrap(k, nx)];
    }
  }
  return field;
}

std::vector<cplx> inverse_transform(const SpectralField& field) {
  const TorusGrid& grid = field.grid();
  FftPlan& plan = cached_plan(grid, FFTW_BACKWARD);
  auto in = plan.input();
  const int nx = grid.nx();
  const int ny = grid.ny();
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) {
    const std::size_t row = static_cast<std::size_t>(wrap(l, ny)) * nx;
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
      in[row + wrap(k, nx)] = parity(k + l) * field(k, l);
    }
  }
  plan.execute();
  auto out = plan.output();
  return {out.begin(), out.end()};
}

SpectralField project_mean_zero(SpectralField field) {
  const TorusGrid& grid = field.grid();
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) field(0, l) = 0.0;
  return field;
}

SpectralField drop_nyquist(SpectralField field) {
  const TorusGrid& grid = field.grid();
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) field(grid.k_min(), l) = 0.0;
  if (grid.dimension() == 2) {
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) field(k, grid.l_min()) = 0.0;
  }
  return field;
}

void require_mean_zero(const SpectralField& field, double relative_tol) {
  const TorusGrid& grid = field.grid();
  const double norm = field.norm();
  const double bound = norm > 0.0 ? relative_tol * norm : relative_tol;
  double worst = 0.0;
  int worst_l = 0;
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) {
    // Mass of the (0, l) mode: sqrt((2 pi)^d) |c|.
    const double mass = std::sqrt(grid.volume()) * std::abs(field(0, l));
    if (mass > worst) {
      worst = mass;
      worst_l = l;
    }
  }
  if (worst > bound) {
    throw ConstraintError("field has nonzero x-mean at l = " + std::to_string(worst_l) +
                          ": mass " + std::to_string(worst) + " exceeds " +
                          std::to_string(bound));
  }
}

// --- Littlewood-Paley ------------------------------------------------------

double LittlewoodPaley::ramp(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double LittlewoodPaley::step(double s) {
  return ramp((s - kRampStart) / (kRampEnd - kRampStart));
}

double LittlewoodPaley::psi(double xi) const {
  const double a = std::abs(xi);
  return step(a) - step(0.5 * a);
}

double LittlewoodPaley::psi_n(int n, double xi) const { return psi(std::ldexp(xi, n)); }

double LittlewoodPaley::enlarged(double xi) const {
  const double a = std::abs(xi);
  return step(2.0 * a) - step(0.25 * a);
}

std::pair<int, int> LittlewoodPaley::contributing_blocks(double xi) const {
  const double a = std::abs(xi);
  if (a == 0.0) return {1, 0};
  // psi_n(xi) != 0 requires 3/5 < 2^n |xi| < 5/3.
  const int lo = static_cast<int>(std::floor(std::log2(kRampStart / a)));
  const int hi = static_cast<int>(std::ceil(std::log2(2.0 * kRampEnd / a)));
  return {lo, hi};
}

SpectralField littlewood_paley_block(const SpectralField& field, int n, double h,
                                     const LittlewoodPaley& family) {
  if (!(h > 0.0)) throw ParameterError("Littlewood-Paley block needs h > 0");
  SpectralField out = field;
  const TorusGrid& grid = field.grid();
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) {
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
      out(k, l) *= k == 0 ? 0.0 : family.psi_n(n, h * k);
    }
  }
  return out;
}

double sobolev_norm(const SpectralField& field, double s) {
  const TorusGrid& grid = field.grid();
  if (s < 0.0) require_mean_zero(field);
  double sum = 0.0;
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) {
    const double wl = grid.dimension() == 2 ? std::pow(1.0 + double(l) * l, s) : 1.0;
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
      if (k == 0 && s < 0.0) continue;
      sum += std::pow(std::abs(double(k)), 2.0 * s) * wl * std::norm(field(k, l));
    }
  }
  return std::sqrt(grid.volume() * sum);
}

}  // namespace kpi
