#include "kpi/hum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "kpi/errors.hpp"
#include "kpi/parallel.hpp"
#include "kpi/propagator.hpp"

namespace kpi {

namespace {

double mode_frequency(const Mode& m, const DispersionParams& p) {
  return p.mode == DispersionMode::Full2D ? omega(m.k, m.l, p) : omega(m.k, 0, p);
}

std::map<int, std::vector<Mode>> group_modes(const std::vector<Mode>& window, ControlKind kind) {
  std::map<int, std::vector<Mode>> groups;
  for (const Mode& m : window) groups[kind == ControlKind::Horizontal ? m.k : m.l].push_back(m);
  return groups;
}

double norm2(const Eigen::VectorXcd& v) { return v.squaredNorm(); }

}  // namespace

std::vector<Mode> hum_window(const TorusGrid& grid, int K, int L) {
  if (K < 1) throw ParameterError("window needs K >= 1");
  if (K > grid.k_max()) throw DimensionError("K exceeds the grid window");
  std::vector<Mode> modes;
  if (grid.dimension() == 1) {
    for (int k = -K; k <= K; ++k)
      if (k != 0) modes.push_back({k, 0});
    return modes;
  }
  if (L < 0 || L > grid.l_max()) throw DimensionError("L exceeds the grid window");
  for (int l = -L; l <= L; ++l)
    for (int k = -K; k <= K; ++k)
      if (k != 0) modes.push_back({k, l});
  return modes;
}

std::vector<Mode> full_window(const TorusGrid& grid) {
  std::vector<Mode> modes;
  for (int l = grid.l_min(); l <= grid.l_max(); ++l)
    for (int k = grid.k_min(); k <= grid.k_max(); ++k)
      if (k != 0 && !grid.is_nyquist(k, l)) modes.push_back({k, l});
  return modes;
}

HumOperator::HumOperator(const TorusGrid& grid, std::vector<Mode> window, double T,
                         Observation obs, DispersionParams p)
    : grid_(grid), window_(std::move(window)), horizon_(T), obs_(std::move(obs)), p_(p) {
  if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
  for (const Mode& m : window_) {
    if (!grid_.contains(m.k, m.l) || m.k == 0 || grid_.is_nyquist(m.k, m.l)) {
      throw DimensionError("HUM window mode (" + std::to_string(m.k) + ", " +
                           std::to_string(m.l) + ") is not an admissible grid mode");
    }
  }
  const auto groups = group_modes(window_, obs_.kind);
  std::vector<std::vector<Mode>> lists;
  for (const auto& [key, modes] : groups) lists.push_back(modes);
  blocks_.resize(lists.size());
  parallel_for(lists.size(), [&](std::size_t i) {
    blocks_[i] = assemble_block(lists[i], T, obs_, p_, TimeKernel::Hum);
    check_block(blocks_[i]);
  });
}

SpectralField HumOperator::apply(const SpectralField& v) const {
  if (!(v.grid() == grid_)) throw DimensionError("field grid differs from the operator's");
  SpectralField out(grid_);
  for (const GramianBlock& b : blocks_) out += apply_block(b, v);
  return out;
}

SpectralField hum_gramian_apply(const SpectralField& v, double T, const Observation& obs,
                                const DispersionParams& p) {
  require_mean_zero(v);
  const HumOperator op(v.grid(), full_window(v.grid()), T, obs, p);
  return op.apply(v);
}

SpectralField ControlTrajectory::control_at(double t) const {
  const TorusGrid& grid = adjoint.grid();
  SpectralField s(grid);
  for (const Mode& m : window) {
    s(m.k, m.l) = unit_phase(t - horizon, mode_frequency(m, params)) * adjoint(m.k, m.l);
  }
  return observation.apply(s);
}

ControlTrajectory synthesize_control(const SpectralField& u0, const SpectralField& u1,
                                     double T, const Observation& obs,
                                     const DispersionParams& p, const HumOptions& options) {
  if (!(u0.grid() == u1.grid())) throw DimensionError("u0 and u1 live on different grids");
  if (!(T > 0.0)) throw ParameterError("horizon T must be positive");
  if (options.max_iter < 0) throw ParameterError("max_iter must be nonnegative");
  if (options.sample_nodes < 2) throw ParameterError("need at least two sample nodes");
  require_mean_zero(u0);
  require_mean_zero(u1);
  const TorusGrid& grid = u0.grid();
  std::vector<Mode> window = options.window.empty() ? full_window(grid) : options.window;
  const HumOperator op(grid, window, T, obs, p);

  const SpectralField rhs_field = u1 - evolve(u0, T, p);
  const auto& blocks = op.blocks();
  const std::size_t nb = blocks.size();

  // Per-block Jacobi-scaled system  (D^-1/2 A D^-1/2) y = D^-1/2 b.
  struct State {
    Eigen::MatrixXcd a;
    Eigen::VectorXd scale;
    Eigen::VectorXcd x, r, ar, pdir, ap;
    double b2 = 0.0;
    double raw_b2 = 0.0;
    bool active = true;
  };
  std::vector<State> st(nb);
  double total_b2 = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    const GramianBlock& b = blocks[i];
    const auto n = static_cast<Eigen::Index>(b.modes.size());
    State& s = st[i];
    s.scale.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = b.matrix(j, j).real();
      s.scale(j) = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
    }
    s.a = s.scale.asDiagonal() * b.matrix * s.scale.asDiagonal();
    Eigen::VectorXcd rhs(n);
    for (Eigen::Index j = 0; j < n; ++j) rhs(j) = rhs_field(b.modes[j].k, b.modes[j].l);
    s.raw_b2 = norm2(rhs);
    s.r = s.scale.asDiagonal() * rhs;
    s.x = Eigen::VectorXcd::Zero(n);
    s.b2 = norm2(s.r);
    total_b2 += s.b2;
    s.active = s.b2 > 0.0;
    if (s.active) {
      s.ar = s.a * s.r;
      s.pdir = s.r;
      s.ap = s.ar;
    }
  }

  std::vector<double> history;
  auto global_residual = [&] {
    double r2 = 0.0;
    for (const State& s : st) r2 += norm2(s.r);
    return total_b2 > 0.0 ? std::sqrt(r2 / total_b2) : 0.0;
  };
  auto converged = [&](const State& s) {
    return norm2(s.r) <= options.tol * options.tol * s.b2;
  };
  for (State& s : st)
    if (s.active && converged(s)) s.active = false;
  history.push_back(global_residual());

  int iterations = 0;
  auto any_active = [&] {
    return std::any_of(st.begin(), st.end(), [](const State& s) { return s.active; });
  };
  while (any_active()) {
    if (iterations >= options.max_iter) {
      throw NonConvergenceError("HUM solve did not reach tolerance " +
                                    std::to_string(options.tol) + " in " +
                                    std::to_string(options.max_iter) +
                                    " iterations (residual " +
                                    std::to_string(history.back()) + ")",
                                history);
    }
    ++iterations;
    for (State& s : st) {
      if (!s.active) continue;
      const double rar = s.r.dot(s.ar).real();
      const double apap = norm2(s.ap);
      if (!(apap > 0.0) || !(rar > 0.0)) {
        history.push_back(global_residual());
        throw NonConvergenceError(
            "HUM solve broke down: the right-hand side has a component in the kernel of "
            "the Gramian (unobservable data)",
            history);
      }
      const double alpha = rar / apap;
      s.x += alpha * s.pdir;
      s.r -= alpha * s.ap;
      const Eigen::VectorXcd ar_new = s.a * s.r;
      const double beta = s.r.dot(ar_new).real() / rar;
      s.pdir = s.r + beta * s.pdir;
      s.ap = ar_new + beta * s.ap;
      s.ar = ar_new;
      if (converged(s)) s.active = false;
    }
    history.push_back(global_residual());
  }

  SpectralField phi(grid);
  double res2 = 0.0, raw_b2 = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    const GramianBlock& b = blocks[i];
    const State& s = st[i];
    if (s.x.size() == 0) continue;
    const Eigen::VectorXcd xb = s.scale.asDiagonal() * s.x;
    Eigen::VectorXcd rhs(xb.size());
    for (Eigen::Index j = 0; j < xb.size(); ++j) {
      phi(b.modes[j].k, b.modes[j].l) = xb(j);
      rhs(j) = rhs_field(b.modes[j].k, b.modes[j].l);
    }
    res2 += norm2(b.matrix * xb - rhs);
    raw_b2 += s.raw_b2;
  }

  ControlTrajectory traj{T, phi, obs, p, window, {}, {}, iterations, history,
                         raw_b2 > 0.0 ? std::sqrt(res2 / raw_b2) : 0.0};
  const int nodes = options.sample_nodes;
  traj.times.reserve(nodes);
  traj.samples.reserve(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double t = T * j / (nodes - 1);
    traj.times.push_back(t);
    traj.samples.push_back(traj.control_at(t));
  }
  return traj;
}

int default_verification_steps(const ControlTrajectory& traj, const DispersionParams& p) {
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < traj.window.size(); ++i) {
    const double w = mode_frequency(traj.window[i], p);
    lo = i == 0 ? w : std::min(lo, w);
    hi = i == 0 ? w : std::max(hi, w);
  }
  // Phase advance of 0.2 per step keeps the RK4 error near 1e-9.
  const double steps = std::ceil(traj.horizon * (hi - lo) / 0.2);
  return std::max(100, static_cast<int>(std::min(steps, 1e7)));
}

SpectralField verify_control(const SpectralField& u0, const ControlTrajectory& traj,
                             const DispersionParams& p, int steps) {
  if (steps == 0) steps = default_verification_steps(traj, p);
  if (steps < 100) throw ParameterError("verify_control needs steps >= 100");
  require_mean_zero(u0);
  const TorusGrid& grid = u0.grid();
  if (!(grid == traj.adjoint.grid())) throw DimensionError("trajectory grid differs from u0");
  const std::size_t n = traj.window.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = mode_frequency(traj.window[i], p);

  // Interaction picture on the window: v' = S(-t) P_W G f(t) =: F(t).
  auto forcing = [&](double t, std::vector<cplx>& out) {
    const SpectralField gf = traj.observation.apply(traj.control_at(t));
    for (std::size_t i = 0; i < n; ++i) {
      const Mode& m = traj.window[i];
      out[i] = unit_phase(-t, w[i]) * gf(m.k, m.l);
    }
  };
  std::vector<cplx> v(n), k1(n), k2(n), k4(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = u0(traj.window[i].k, traj.window[i].l);
  const double T = traj.horizon;
  const double dt = T / steps;
  forcing(0.0, k1);
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    // F does not depend on v, so the two midpoint stages coincide.
    forcing(t + 0.5 * dt, k2);
    forcing(t + dt, k4);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] += dt / 6.0 * (k1[i] + 4.0 * k2[i] + k4[i]);
    }
    std::swap(k1, k4);
  }
  // Modes outside the window evolve freely.
  SpectralField out = evolve(u0, T, p);
  for (std::size_t i = 0; i < n; ++i) {
    out(traj.window[i].k, traj.window[i].l) = unit_phase(T, w[i]) * v[i];
  }
  return out;
}

double control_cost(const ControlTrajectory& traj, int panels) {
  if (panels <= 0) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < traj.window.size(); ++i) {
      const double w = mode_frequency(traj.window[i], traj.params);
      lo = i == 0 ? w : std::min(lo, w);
      hi = i == 0 ? w : std::max(hi, w);
    }
    panels = panels_for_spread(hi - lo, traj.horizon);
  }
  double total = 0.0;
  for (const QuadratureNode& node : composite_gauss_legendre(0.0, traj.horizon, panels)) {
    const double nf = traj.control_at(node.t).norm();
    total += node.w * nf * nf;
  }
  return total;
}

}  // namespace kpi
