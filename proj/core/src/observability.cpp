#include "kpi/observability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "kpi/errors.hpp"
#include "kpi/propagator.hpp"

namespace kpi {

namespace {

// G on physical samples (row-major, y slowest), in place.
void control_samples(ControlKind kind, const ControlProfile& g, const TorusGrid& grid,
                     std::vector<cplx>& u) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  const auto& w = g.samples();
  if (kind == ControlKind::Horizontal) {
    const double cell = kTwoPi / ny;
    for (int i = 0; i < nx; ++i) {
      cplx mean = 0.0;
      for (int j = 0; j < ny; ++j) mean += w[j] * u[static_cast<std::size_t>(j) * nx + i];
      mean *= cell;
      for (int j = 0; j < ny; ++j) {
        cplx& v = u[static_cast<std::size_t>(j) * nx + i];
        v = w[j] * (v - mean);
      }
    }
    return;
  }
  const double cell = kTwoPi / nx;
  for (int j = 0; j < ny; ++j) {
    cplx* row = u.data() + static_cast<std::size_t>(j) * nx;
    cplx mean = 0.0;
    if (kind == ControlKind::Vertical) {
      for (int i = 0; i < nx; ++i) mean += w[i] * row[i];
      mean *= cell;
    }
    for (int i = 0; i < nx; ++i) row[i] = w[i] * (row[i] - mean);
  }
}

void check_profile_grid(ControlKind kind, const ControlProfile& g, const TorusGrid& grid) {
  if (kind == ControlKind::Horizontal) {
    if (grid.dimension() != 2) throw DimensionError("horizontal control needs a 2D field");
    if (g.grid().nx() != grid.ny()) {
      throw DimensionError("horizontal profile grid does not match the y axis");
    }
  } else if (g.grid().nx() != grid.nx()) {
    throw DimensionError("control profile grid does not match the x axis");
  }
}

SpectralField apply_kind(ControlKind kind, const SpectralField& u, const ControlProfile& g) {
  check_profile_grid(kind, g, u.grid());
  std::vector<cplx> s = inverse_transform(u);
  control_samples(kind, g, u.grid(), s);
  return forward_transform(s, u.grid());
}

double mode_frequency(const Mode& m, const DispersionParams& p) {
  return p.mode == DispersionMode::Full2D ? omega(m.k, m.l, p) : omega(m.k, 0, p);
}

// Static Gram of vertical control restricted to one transverse frequency.
cplx vertical_gram_1d(const ControlProfile& g, int k1, int k2) {
  return g.g2_hat(k1 - k2) - kTwoPi * g.g_hat(k1) * g.g2_hat(-k2) -
         kTwoPi * g.g_hat(-k2) * g.g2_hat(k1) +
         kTwoPi * kTwoPi * g.g_hat(k1) * g.g_hat(-k2) * g.g2_hat(0);
}

}  // namespace

SpectralField apply_vertical_control(const SpectralField& u, const ControlProfile& g) {
  return apply_kind(ControlKind::Vertical, u, g);
}

SpectralField apply_horizontal_control(const SpectralField& u, const ControlProfile& g) {
  if (u.grid().dimension() != 2) throw DimensionError("horizontal control needs a 2D field");
  return apply_kind(ControlKind::Horizontal, u, g);
}

SpectralField apply_multiplier(const SpectralField& u, const ControlProfile& g) {
  return apply_kind(ControlKind::Multiplier, u, g);
}

SpectralField Observation::apply(const SpectralField& u) const {
  return apply_kind(kind, u, profile);
}

cplx Observation::static_gram(int k1, int l1, int k2, int l2) const {
  switch (kind) {
    case ControlKind::Vertical:
      return l1 == l2 ? vertical_gram_1d(profile, k1, k2) : cplx(0.0);
    case ControlKind::Horizontal:
      return k1 == k2 ? vertical_gram_1d(profile, l1, l2) : cplx(0.0);
    case ControlKind::Multiplier:
      return l1 == l2 ? profile.g2_hat(k1 - k2) : cplx(0.0);
  }
  return 0.0;
}

Observation vertical(const ControlProfile& g) { return {ControlKind::Vertical, g}; }
Observation horizontal(const ControlProfile& g) { return {ControlKind::Horizontal, g}; }
Observation multiplier(const ControlProfile& g) { return {ControlKind::Multiplier, g}; }

cplx time_factor(double delta, double T) {
  const double z = T * delta;
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return T * cplx(1.0 - z2 / 6.0 + z2 * z2 / 120.0, z / 2.0 - z * z2 / 24.0);
  }
  const double s = std::sin(0.5 * z);
  return cplx(std::sin(z), 2.0 * s * s) / delta;
}

cplx time_factor_quadrature(double delta, double T, int panels) {
  if (panels < 1) throw ParameterError("time quadrature needs at least one panel");
  using rule = boost::math::quadrature::gauss<double, 16>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();
  const double width = T / panels;
  const double half = 0.5 * width;
  // Panels are translates of each other: sum_p e^{i D c_p} times the
  // reference-panel sum.
  cplx local = 0.0;
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    const double x = abscissa[i] * half;
    const double w = weights[i] * half;
    local += x == 0.0 ? cplx(w) : w * 2.0 * std::cos(delta * x);
  }
  const cplx step = std::polar(1.0, delta * width);
  cplx centers = 0.0;
  cplx z = 0.0;
  for (int p = 0; p < panels; ++p) {
    if (p % 64 == 0) z = std::polar(1.0, std::fmod(delta * (p + 0.5) * width, kTwoPi));
    centers += z;
    z *= step;
  }
  return local * centers;
}

GramianBlock assemble_block(const std::vector<Mode>& modes, double T,
                            const Observation& obs, const DispersionParams& p,
                            TimeKernel kernel, std::optional<int> panels) {
  if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
  const std::size_t n = modes.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = mode_frequency(modes[i], p);
  GramianBlock block;
  block.horizon = T;
  block.orientation = obs.kind;
  block.modes = modes;
  if (!modes.empty()) {
    block.fixed_index = obs.kind == ControlKind::Horizontal ? modes.front().k : modes.front().l;
  }
  block.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const cplx m = obs.static_gram(modes[a].k, modes[a].l, modes[b].k, modes[b].l);
      const double delta = kernel == TimeKernel::Observability ? w[b] - w[a] : w[a] - w[b];
      cplx e;
      if (m == cplx(0.0)) {
        e = 0.0;
      } else if (panels) {
        e = time_factor_quadrature(delta, T, *panels);
      } else {
        e = time_factor(delta, T);
      }
      const cplx v = e * m;
      block.matrix(a, b) = v;
      if (a == b) {
        block.matrix(a, a) = v.real();
      } else {
        block.matrix(b, a) = std::conj(v);
      }
    }
  }
  return block;
}

std::vector<Mode> x_window(int K, int l) {
  if (K < 1) throw ParameterError("window half-width K must be >= 1");
  std::vector<Mode> modes;
  for (int k = -K; k <= K; ++k)
    if (k != 0) modes.push_back({k, l});
  return modes;
}

GramianBlock assemble_observability_gramian(double T, int K, int l, const ControlProfile& g,
                                            const DispersionParams& p) {
  if (K > g.grid().k_max()) {
    throw DimensionError("K = " + std::to_string(K) + " exceeds the grid window (k_max " +
                         std::to_string(g.grid().k_max()) + ")");
  }
  GramianBlock b = assemble_block(x_window(K, l), T, vertical(g), p);
  b.fixed_index = l;
  check_block(b);
  return b;
}

GramianBlock assemble_horizontal_gramian(double T, int k, int L, const ControlProfile& gy,
                                         const DispersionParams& p) {
  if (k == 0) throw DomainError("horizontal block needs k != 0");
  if (L > gy.grid().k_max()) throw DimensionError("L exceeds the y grid window");
  std::vector<Mode> modes;
  for (int l = -L; l <= L; ++l) modes.push_back({k, l});
  GramianBlock b = assemble_block(modes, T, horizontal(gy), p);
  b.fixed_index = k;
  check_block(b);
  return b;
}

void check_block(const GramianBlock& block) {
  const auto& m = block.matrix;
  if (m.size() == 0) return;
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw NumericalConsistencyError("Gramian block is not hermitian: defect " +
                                    std::to_string(asym / scale));
  }
  const Eigen::VectorXd ev = block_eigenvalues(block);
  const double trace = m.trace().real();
  const double floor = -1e-10 * trace / static_cast<double>(m.rows());
  if (ev(0) < floor) {
    throw NumericalConsistencyError("Gramian block is not positive semidefinite: eigenvalue " +
                                    std::to_string(ev(0)));
  }
}

Eigen::VectorXd block_eigenvalues(const GramianBlock& block) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block.matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalConsistencyError("eigensolver failed on a Gramian block");
  }
  return es.eigenvalues();
}

ObservabilityEstimate observability_constant(const std::vector<GramianBlock>& blocks) {
  if (blocks.empty()) throw ParameterError("observability_constant needs at least one block");
  ObservabilityEstimate est;
  est.lambda_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    check_block(blocks[i]);
    const double lo = blocks[i].matrix.size() == 0 ? 0.0 : block_eigenvalues(blocks[i])(0);
    est.block_minima.push_back(lo);
    if (lo < est.lambda_min) {
      est.lambda_min = lo;
      est.worst_block = i;
    }
  }
  est.constant = est.lambda_min > 0.0 ? 1.0 / est.lambda_min
                                      : std::numeric_limits<double>::infinity();
  return est;
}

double observability_ratio(const SpectralField& u0, double T, const Observation& obs,
                           const DispersionParams& p, RatioMethod method, int panels) {
  if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
  require_mean_zero(u0);
  const TorusGrid& grid = u0.grid();
  const SpectralField u = drop_nyquist(project_mean_zero(u0));
  const double norm2 = u.norm() * u.norm();
  if (!(norm2 > 0.0)) throw DomainError("observability ratio is undefined for zero data");

  if (method == RatioMethod::Gramian) {
    // Group the support into decoupled blocks.
    std::map<int, std::vector<Mode>> groups;
    for (int l = grid.l_min(); l <= grid.l_max(); ++l) {
      for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
        if (u(k, l) == cplx(0.0)) continue;
        const int key = obs.kind == ControlKind::Horizontal ? k : l;
        groups[key].push_back({k, l});
      }
    }
    double total = 0.0;
    for (const auto& [key, modes] : groups) {
      const GramianBlock b = assemble_block(modes, T, obs, p);
      Eigen::VectorXcd c(static_cast<Eigen::Index>(modes.size()));
      for (std::size_t i = 0; i < modes.size(); ++i) c(i) = u(modes[i].k, modes[i].l);
      total += c.dot(b.matrix * c).real();
    }
    return grid.volume() * total / norm2;
  }

  const std::vector<double> w = frequency_table(grid, p);
  if (panels <= 0) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (u.coefficients()[i] == cplx(0.0)) continue;
      lo = first ? w[i] : std::min(lo, w[i]);
      hi = first ? w[i] : std::max(hi, w[i]);
      first = false;
    }
    panels = panels_for_spread(hi - lo, T);
  }
  const auto nodes = composite_gauss_legendre(0.0, T, panels);
  double total = 0.0;
  SpectralField ut(grid);
  for (const QuadratureNode& node : nodes) {
    auto src = u.coefficients();
    auto dst = ut.coefficients();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      dst[i] = src[i] == cplx(0.0) ? cplx(0.0) : unit_phase(node.t, w[i]) * src[i];
    }
    std::vector<cplx> s = inverse_transform(ut);
    control_samples(obs.kind, obs.profile, grid, s);
    double e = 0.0;
    for (const cplx& v : s) e += std::norm(v);
    total += node.w * e * grid.cell_volume();
  }
  return total / norm2;
}

QuadratureApplicator::QuadratureApplicator(const TorusGrid& grid, std::vector<Mode> window,
                                           double T, Observation obs, DispersionParams p,
                                           TimeKernel kernel, int panels)
    : grid_(grid),
      window_(std::move(window)),
      obs_(std::move(obs)),
      p_(p),
      kernel_(kernel),
      panels_(panels) {
  if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
  check_profile_grid(obs_.kind, obs_.profile, grid_);
  freq_.resize(window_.size());
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < window_.size(); ++i) {
    if (!grid_.contains(window_[i].k, window_[i].l)) {
      throw DimensionError("window mode outside the grid");
    }
    freq_[i] = mode_frequency(window_[i], p_);
    lo = i == 0 ? freq_[i] : std::min(lo, freq_[i]);
    hi = i == 0 ? freq_[i] : std::max(hi, freq_[i]);
  }
  if (panels_ <= 0) panels_ = panels_for_spread(hi - lo, T);
  nodes_ = composite_gauss_legendre(0.0, T, panels_);
}

SpectralField QuadratureApplicator::apply(const SpectralField& v) const {
  if (!(v.grid() == grid_)) throw DimensionError("field grid differs from the applicator's");
  const double sign = kernel_ == TimeKernel::Observability ? 1.0 : -1.0;
  SpectralField acc(grid_);
  SpectralField work(grid_);
  std::vector<cplx> phase(window_.size());
  for (const QuadratureNode& node : nodes_) {
    std::fill(work.coefficients().begin(), work.coefficients().end(), cplx(0.0));
    for (std::size_t i = 0; i < window_.size(); ++i) {
      phase[i] = unit_phase(sign * node.t, freq_[i]);
      work(window_[i].k, window_[i].l) = phase[i] * v(window_[i].k, window_[i].l);
    }
    std::vector<cplx> s = inverse_transform(work);
    control_samples(obs_.kind, obs_.profile, grid_, s);
    control_samples(obs_.kind, obs_.profile, grid_, s);
    const SpectralField g2 = forward_transform(s, grid_);
    for (std::size_t i = 0; i < window_.size(); ++i) {
      acc(window_[i].k, window_[i].l) +=
          node.w * std::conj(phase[i]) * g2(window_[i].k, window_[i].l);
    }
  }
  return acc;
}

SpectralField apply_block(const GramianBlock& block, const SpectralField& v) {
  const std::size_t n = block.modes.size();
  Eigen::VectorXcd c(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) c(i) = v(block.modes[i].k, block.modes[i].l);
  const Eigen::VectorXcd r = block.matrix * c;
  SpectralField out(v.grid());
  for (std::size_t i = 0; i < n; ++i) out(block.modes[i].k, block.modes[i].l) = r(i);
  return out;
}

double outer_window_fraction(const SpectralField& u, int K) {
  const TorusGrid& grid = u.grid();
  double outer = 0.0, total = 0.0;
  for (int l = grid.l_min(); l <= grid.l_max(); ++l) {
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
      const double m = std::norm(u(k, l));
      total += m;
      if (std::abs(k) > 0.9 * K) outer += m;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace kpi
