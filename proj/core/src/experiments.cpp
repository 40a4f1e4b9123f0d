#include "kpi/experiments.hpp"

#include <fftw3.h>
#include <mpfr.h>
#include <openssl/opensslv.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>

#include "kpi/counterexamples.hpp"
#include "kpi/dispersion.hpp"
#include "kpi/errors.hpp"
#include "kpi/field_io.hpp"
#include "kpi/hum.hpp"
#include "kpi/observability.hpp"
#include "kpi/parallel.hpp"
#include "kpi/propagator.hpp"
#include "kpi/spectral_constant.hpp"

namespace kpi {

namespace {

std::string join(const std::string& subdir, const std::string& name) {
  return subdir.empty() ? name : subdir + "/" + name;
}

int grid_size_for(int kmax) {
  return std::max(64, static_cast<int>(std::bit_ceil(static_cast<unsigned>(2 * kmax + 4))));
}

// Turns library argument errors into config errors pointing at the section.
template <class F>
auto with_section(const Section& s, F&& f) {
  try {
    return f();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string(e.what()) + " in section [" + s.name() + "]", s.line());
  } catch (const DimensionError& e) {
    throw ConfigError(std::string(e.what()) + " in section [" + s.name() + "]", s.line());
  }
}

Interval section_support(const Section& s) {
  return {s.get_double("a", kPi / 4.0), s.get_double("b", 3.0 * kPi / 4.0)};
}

ProfileKind section_profile(const Section& s) {
  const std::string name = s.get_string("profile", "smooth-exp");
  try {
    return parse_profile_kind(name);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what(), s.line_of("profile"));
  }
}

Table field_table(const std::string& name, const SpectralField& u) {
  Table t{name, {"k", "l", "re", "im"}, {}};
  const TorusGrid& g = u.grid();
  for (int l = g.l_min(); l <= g.l_max(); ++l)
    for (int k = g.k_min(); k <= g.k_max(); ++k)
      t.add_row({(long long)k, (long long)l, u(k, l).real(), u(k, l).imag()});
  return t;
}

void write_field_artifact(OutputSink& sink, const std::string& subdir, const std::string& name,
                          const SpectralField& u) {
  if (sink.format() == OutputFormat::Binary) {
    sink.write_binary(join(subdir, name + ".kpif"),
                      [&](std::ostream& out) { write_field(out, u); });
  } else {
    sink.write_table(subdir, field_table(name, u));
  }
}

TorusGrid section_grid(const Section& s, int nx_default, int ny_default) {
  const int nx = static_cast<int>(s.get_int("nx", nx_default));
  const int ny = static_cast<int>(s.get_int("ny", ny_default));
  return ny == 0 ? TorusGrid::line(nx) : TorusGrid::plane(nx, ny);
}

DispersionParams section_params(const Section& s, const TorusGrid& grid) {
  const double alpha = s.get_double("alpha", 2.0);
  if (grid.dimension() == 1) return DispersionParams::reduced(alpha, s.get_double("lambda", 1.0));
  return DispersionParams::full(alpha);
}

SpectralField load_section_field(const Section& s, const std::string& key) {
  try {
    return load_field(s.get_string(key));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string(e.what()), s.line_of(key));
  }
}

SpectralField section_field(const Section& s, const std::string& key, const TorusGrid& grid,
                            Rng& rng, int K, int L) {
  if (s.has(key)) {
    SpectralField u = load_section_field(s, key);
    if (!(u.grid() == grid)) {
      throw ConfigError("field '" + s.get_string(key) + "' does not live on the configured grid",
                        s.line_of(key));
    }
    return u;
  }
  return random_field(grid, rng, K, L);
}

// --- engines ---------------------------------------------------------------

Summary run_evolve(const Section& s, OutputSink& sink, const std::string& dir, Rng& rng) {
  s.require_only({"kind", "seed", "nx", "ny", "K", "L", "alpha", "lambda", "times", "input"});
  const TorusGrid grid = section_grid(s, 128, 16);
  const DispersionParams p = section_params(s, grid);
  const int K = static_cast<int>(s.get_int("K", 16));
  const int L = static_cast<int>(s.get_int("L", 4));
  const SpectralField u0 = section_field(s, "input", grid, rng, K, L);
  const std::vector<double> times = s.get_doubles("times", {0.1, 1.0, 10.0});
  Table norms{"norms", {"index", "t", "norm", "relative_drift"}, {}};
  const double n0 = u0.norm();
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const SpectralField ut = evolve(u0, times[i], p);
    const double drift = n0 > 0.0 ? std::abs(ut.norm() - n0) / n0 : 0.0;
    worst = std::max(worst, drift);
    norms.add_row({(long long)i, times[i], ut.norm(), drift});
    write_field_artifact(sink, dir, "snapshot_" + std::to_string(i), ut);
  }
  sink.write_table(dir, norms);
  Summary sum;
  sum.set("kind", std::string("evolve"));
  sum.set("snapshots", (long long)times.size());
  sum.set("initial_norm", n0);
  sum.set("max_relative_drift", worst);
  return sum;
}

struct BlockSetup {
  TorusGrid grid;
  Observation obs;
  DispersionParams p;
};

BlockSetup observe_setup(const Section& s) {
  const TorusGrid grid = section_grid(s, 128, 32);
  const std::string control = s.get_string("control", "vertical");
  const Interval iv = section_support(s);
  const ProfileKind kind = section_profile(s);
  if (control == "vertical") {
    return {grid, vertical(ControlProfile(iv, kind, grid.x_axis())), section_params(s, grid)};
  }
  if (control == "horizontal") {
    if (grid.dimension() != 2) throw ConfigError("horizontal control needs ny > 0", s.line());
    return {grid, horizontal(ControlProfile(iv, kind, grid.y_axis())), section_params(s, grid)};
  }
  throw ConfigError("control must be vertical or horizontal", s.line_of("control"));
}

std::vector<Mode> block_modes(const BlockSetup& b, int index, int K, int L) {
  std::vector<Mode> modes;
  if (b.obs.kind == ControlKind::Horizontal) {
    for (int l = -L; l <= L; ++l) modes.push_back({index, l});
  } else {
    modes = x_window(K, index);
  }
  return modes;
}

void write_matrix_artifact(OutputSink& sink, const std::string& dir, const std::string& name,
                           const GramianBlock& b) {
  if (sink.format() == OutputFormat::Binary) {
    MatrixRecord rec;
    rec.fixed_index = b.fixed_index;
    rec.orientation = static_cast<std::uint32_t>(b.orientation);
    rec.horizon = b.horizon;
    for (const Mode& m : b.modes) {
      rec.free_indices.push_back(b.orientation == ControlKind::Horizontal ? m.l : m.k);
    }
    rec.matrix = b.matrix;
    sink.write_binary(join(dir, name + ".kpim"), [&](std::ostream& out) { write_matrix(out, rec); });
    return;
  }
  Table t{name, {"row", "col", "re", "im"}, {}};
  for (Eigen::Index i = 0; i < b.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < b.matrix.cols(); ++j)
      t.add_row({(long long)i, (long long)j, b.matrix(i, j).real(), b.matrix(i, j).imag()});
  sink.write_table(dir, t);
}

Summary run_observe(const Section& s, OutputSink& sink, const std::string& dir) {
  s.require_only({"kind", "seed", "nx", "ny", "K", "L", "alpha", "lambda", "T", "control", "a",
                  "b", "profile", "check_panels"});
  const BlockSetup setup = observe_setup(s);
  const double T = s.get_double("T", 1.0);
  const int K = static_cast<int>(s.get_int("K", 32));
  const int L = static_cast<int>(s.get_int("L", setup.grid.dimension() == 2 ? 8 : 0));
  const bool check = s.get_bool("check_panels", false);

  std::vector<int> indices;
  if (setup.obs.kind == ControlKind::Horizontal) {
    for (int k = -K; k <= K; ++k)
      if (k != 0) indices.push_back(k);
  } else {
    for (int l = -L; l <= L; ++l) indices.push_back(l);
  }
  std::vector<GramianBlock> blocks(indices.size());
  parallel_for(indices.size(), [&](std::size_t i) {
    blocks[i] = assemble_block(block_modes(setup, indices[i], K, L), T, setup.obs, setup.p);
    blocks[i].fixed_index = indices[i];
  });
  const ObservabilityEstimate est = observability_constant(blocks);

  Table t{"blocks", {"index", "size", "lambda_min", "lambda_max"}, {}};
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Eigen::VectorXd ev = block_eigenvalues(blocks[i]);
    t.add_row({(long long)indices[i], (long long)ev.size(), ev(0), ev(ev.size() - 1)});
    if (sink.format() == OutputFormat::Binary) {
      write_matrix_artifact(sink, dir, "block_" + std::to_string(indices[i]), blocks[i]);
    }
  }
  sink.write_table(dir, t);
  Summary sum;
  sum.set("kind", std::string("observe"));
  sum.set("control", to_string(setup.obs.profile.kind()) + "/" + s.get_string("control", "vertical"));
  sum.set("horizon", T);
  sum.set("lambda_min", est.lambda_min);
  sum.set("observability_constant", est.constant);
  sum.set("worst_index", (long long)indices[est.worst_block]);

  if (check) {
    // Oracle path: the same worst block with quadrature time factors at P and 2P panels.
    const GramianBlock& worst = blocks[est.worst_block];
    double spread = 0.0;
    for (const Mode& a : worst.modes)
      for (const Mode& b : worst.modes) {
        const double wa = setup.p.mode == DispersionMode::Full2D ? omega(a.k, a.l, setup.p)
                                                                 : omega(a.k, 0, setup.p);
        const double wb = setup.p.mode == DispersionMode::Full2D ? omega(b.k, b.l, setup.p)
                                                                 : omega(b.k, 0, setup.p);
        spread = std::max(spread, std::abs(wa - wb));
      }
    const int panels = panels_for_spread(spread, T);
    const auto q1 = assemble_block(worst.modes, T, setup.obs, setup.p, TimeKernel::Observability,
                                   panels);
    const auto q2 = assemble_block(worst.modes, T, setup.obs, setup.p, TimeKernel::Observability,
                                   2 * panels);
    const double l1 = block_eigenvalues(q1)(0);
    const double l2 = block_eigenvalues(q2)(0);
    sum.set("oracle_panels", (long long)panels);
    sum.set("oracle_lambda_min", l1);
    sum.set("oracle_lambda_min_doubled", l2);
    sum.set("oracle_relative_change", std::abs(l2 - l1) / std::abs(l1));
  }
  return sum;
}

Summary run_gramian(const Section& s, OutputSink& sink, const std::string& dir) {
  s.require_only({"kind", "seed", "nx", "ny", "K", "L", "alpha", "lambda", "T", "control", "a",
                  "b", "profile", "index"});
  const BlockSetup setup = observe_setup(s);
  const double T = s.get_double("T", 1.0);
  const int K = static_cast<int>(s.get_int("K", 32));
  const int L = static_cast<int>(s.get_int("L", 8));
  const int index = static_cast<int>(s.get_int("index", setup.obs.kind == ControlKind::Horizontal ? 1 : 0));
  GramianBlock b = assemble_block(block_modes(setup, index, K, L), T, setup.obs, setup.p);
  b.fixed_index = index;
  check_block(b);
  write_matrix_artifact(sink, dir, "gramian", b);
  const Eigen::VectorXd ev = block_eigenvalues(b);
  Table t{"eigenvalues", {"rank", "eigenvalue"}, {}};
  for (Eigen::Index i = 0; i < ev.size(); ++i) t.add_row({(long long)i, ev(i)});
  sink.write_table(dir, t);
  Summary sum;
  sum.set("kind", std::string("gramian"));
  sum.set("index", (long long)index);
  sum.set("size", (long long)ev.size());
  sum.set("lambda_min", ev(0));
  sum.set("lambda_max", ev(ev.size() - 1));
  return sum;
}

Summary run_control(const Section& s, OutputSink& sink, const std::string& dir, Rng& rng) {
  s.require_only({"kind", "seed", "nx", "ny", "K", "L", "alpha", "lambda", "T", "control", "a",
                  "b", "profile", "tol", "max_iter", "samples", "input", "target", "verify",
                  "verify_steps"});
  const BlockSetup setup = observe_setup(s);
  const TorusGrid& grid = setup.grid;
  const double T = s.get_double("T", 1.0);
  const int K = static_cast<int>(s.get_int("K", 16));
  const int L = static_cast<int>(s.get_int("L", grid.dimension() == 2 ? 4 : 0));
  const SpectralField u0 = section_field(s, "input", grid, rng, K, L);
  const std::string target = s.get_string("target", "zero");
  SpectralField u1(grid);
  if (target == "free") {
    u1 = evolve(u0, T, setup.p);
  } else if (target != "zero") {
    u1 = load_section_field(s, "target");
    if (!(u1.grid() == grid)) throw ConfigError("target field grid mismatch", s.line_of("target"));
  }
  HumOptions opt;
  opt.tol = s.get_double("tol", 1e-10);
  opt.max_iter = static_cast<int>(s.get_int("max_iter", 500));
  opt.sample_nodes = static_cast<int>(s.get_int("samples", 256));
  opt.window = hum_window(grid, K, L);
  const ControlTrajectory traj = synthesize_control(u0, u1, T, setup.obs, setup.p, opt);

  Table res{"residuals", {"iteration", "relative_residual"}, {}};
  for (std::size_t i = 0; i < traj.residual_history.size(); ++i) {
    res.add_row({(long long)i, traj.residual_history[i]});
  }
  sink.write_table(dir, res);
  Table samples{"controls", {"t", "norm", "max_zero_mode"}, {}};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    samples.add_row({traj.times[i], traj.samples[i].norm(), traj.samples[i].max_zero_mode()});
  }
  sink.write_table(dir, samples);
  if (sink.format() == OutputFormat::Binary) {
    TrajectoryRecord rec{traj.horizon, traj.adjoint, traj.times, traj.samples};
    sink.write_binary(join(dir, "trajectory.kpit"),
                      [&](std::ostream& out) { write_trajectory(out, rec); });
  } else {
    write_field_artifact(sink, dir, "adjoint", traj.adjoint);
  }
  Summary sum;
  sum.set("kind", std::string("control"));
  sum.set("iterations", (long long)traj.iterations);
  sum.set("final_scaled_residual", traj.residual_history.back());
  sum.set("final_residual", traj.final_residual);
  sum.set("control_cost", control_cost(traj));
  if (s.get_bool("verify", true)) {
    const int steps = static_cast<int>(s.get_int("verify_steps", 0));
    const SpectralField uT = verify_control(u0, traj, setup.p, steps);
    SpectralField diff = uT - u1;
    // Only the window is steered.
    SpectralField masked(grid);
    for (const Mode& m : traj.window) masked(m.k, m.l) = diff(m.k, m.l);
    sum.set("verification_steps",
            (long long)(steps > 0 ? steps : default_verification_steps(traj, setup.p)));
    sum.set("terminal_error", masked.norm());
    sum.set("terminal_error_relative", masked.norm() / std::max(u0.norm(), 1e-300));
  }
  return sum;
}

Summary run_dichotomy(const Section& s, OutputSink& sink, const std::string& dir) {
  s.require_only({"kind", "seed", "alpha", "T", "n_first", "n_last", "b", "B", "beta"});
  PacketParams pp;
  pp.alpha = s.get_double("alpha", 0.5);
  pp.b = s.get_double("b", 0.5);
  pp.B = s.get_double("B", 1.0);
  pp.beta = s.get_double("beta", kPi / 4.0);
  const double T = s.get_double("T", 1.0);
  const int n_first = static_cast<int>(s.get_int("n_first", 4));
  const int n_last = static_cast<int>(s.get_int("n_last", 9));
  const DichotomyResult r = dichotomy_experiment(pp, T, n_first, n_last);
  Table t{"dichotomy", {"n", "h_n", "eps_n", "ratio", "grid_nx"}, {}};
  for (const DichotomyRow& row : r.rows) {
    t.add_row({(long long)row.n, row.h, row.eps, row.ratio, (long long)row.grid_nx});
  }
  sink.write_table(dir, t);
  Summary sum;
  sum.set("kind", std::string("dichotomy"));
  sum.set("alpha", r.alpha);
  sum.set("horizon", r.horizon);
  sum.set("fitted_slope", r.slope);
  sum.set("strictly_decreasing", r.strictly_decreasing);
  sum.set("decay_last_over_first", r.decay);
  sum.set("floor_min_over_first", r.floor);
  if (r.alpha < 1.0) {
    sum.set("pass_decreasing", r.strictly_decreasing && r.decay <= 0.2);
    sum.set("pass_slope", r.slope >= 0.3 && r.slope <= 0.7);
  } else {
    sum.set("pass_floor", r.floor >= 0.3);
  }
  return sum;
}

Summary run_spectral_constant(const Section& s, OutputSink& sink, const std::string& dir) {
  s.require_only({"kind", "seed", "nx", "a", "b", "profile", "m0_max"});
  const TorusGrid grid = TorusGrid::line(static_cast<int>(s.get_int("nx", 1024)));
  const ControlProfile g(section_support(s), section_profile(s), grid);
  const int m0_max = static_cast<int>(s.get_int("m0_max", 32));
  Table t{"spectral_constant", {"m0", "kappa", "lambda_min", "digits"}, {}};
  bool monotone = true;
  double prev = 0.0;
  for (int m0 = 0; m0 <= m0_max; ++m0) {
    const SpectralConstant c = spectral_constant(g, m0);
    t.add_row({(long long)m0, c.kappa, c.lambda_min, (long long)c.digits});
    if (m0 > 0 && c.kappa < prev) monotone = false;
    prev = c.kappa;
  }
  sink.write_table(dir, t);
  Summary sum;
  sum.set("kind", std::string("spectral-constant"));
  sum.set("integral_of_square", g.integral_of_square());
  sum.set("kappa_max", prev);
  sum.set("nondecreasing", monotone);
  return sum;
}

Summary run_dispersion(const Section& s, OutputSink& sink, const std::string& dir) {
  s.require_only({"kind", "seed", "alpha", "lambda", "xi_min", "xi_max", "points"});
  const auto p = DispersionParams::reduced(s.get_double("alpha", 2.0), s.get_double("lambda", 1.0));
  const double lo = s.get_double("xi_min", -3.0);
  const double hi = s.get_double("xi_max", 3.0);
  const int points = static_cast<int>(s.get_int("points", 601));
  if (!(hi > lo) || points < 2) throw ConfigError("need xi_min < xi_max and points >= 2", s.line());
  Table t{"dispersion", {"xi", "phi", "phi_prime"}, {}};
  for (int i = 0; i < points; ++i) {
    const double xi = lo + (hi - lo) * i / (points - 1);
    if (xi == 0.0) continue;
    t.add_row({xi, symbol(xi, p), group_velocity(xi, p)});
  }
  sink.write_table(dir, t);
  Summary sum;
  sum.set("kind", std::string("dispersion"));
  if (auto cp = critical_points(p)) {
    sum.set("xi0", cp->first.xi0);
    sum.set("phi_pp_xi0", cp->first.phi_pp);
    sum.set("A0", cp->first.a0);
  }
  return sum;
}

Summary run_scan(const Section& s, OutputSink& sink, const std::string& dir, Rng& rng) {
  s.require_only({"kind", "seed", "h", "n_first", "n_last", "epsilon0", "T", "trials", "alpha",
                  "N0", "a", "b", "profile"});
  ScanOptions o;
  o.h = s.get_double("h", o.h);
  o.n_first = static_cast<int>(s.get_int("n_first", o.n_first));
  o.n_last = static_cast<int>(s.get_int("n_last", o.n_last));
  o.epsilon0 = s.get_double("epsilon0", o.epsilon0);
  o.T = s.get_double("T", o.T);
  o.trials = static_cast<int>(s.get_int("trials", o.trials));
  o.alpha = s.get_double("alpha", o.alpha);
  o.N0 = static_cast<int>(s.get_int("N0", o.N0));
  o.support = section_support(s);
  o.kind = section_profile(s);
  const auto rows = frequency_localized_scan(o, rng);
  Table t{"frequency_scan", {"n", "regime", "modes", "trial_max", "sharp"}, {}};
  double worst = 0.0;
  for (const ScanRow& r : rows) {
    t.add_row({(long long)r.n, r.regime, (long long)r.modes, r.trial_max, r.sharp});
    worst = std::max(worst, std::max(r.trial_max, r.sharp));
  }
  sink.write_table(dir, t);
  Summary sum;
  sum.set("kind", std::string("frequency-scan"));
  sum.set("largest_constant", worst);
  sum.set("all_finite", std::isfinite(worst));
  return sum;
}

Summary run_weak(const Section& s, OutputSink& sink, const std::string& dir, Rng& rng) {
  s.require_only({"kind", "seed", "hs", "T", "trials", "alpha", "xi_max", "a", "b", "profile"});
  WeakOptions o;
  o.hs = s.get_doubles("hs", o.hs);
  o.T = s.get_double("T", o.T);
  o.trials = static_cast<int>(s.get_int("trials", o.trials));
  o.alpha = s.get_double("alpha", o.alpha);
  o.xi_max = s.get_double("xi_max", o.xi_max);
  o.support = section_support(s);
  o.kind = section_profile(s);
  const auto rows = weak_observability_diagnostic(o, rng);
  Table t{"weak_observability", {"h", "K", "trials", "c_max", "c_mean"}, {}};
  double worst = 0.0;
  for (const WeakRow& r : rows) {
    t.add_row({r.h, (long long)r.K, (long long)r.trials, r.c_max, r.c_mean});
    worst = std::max(worst, r.c_max);
  }
  sink.write_table(dir, t);
  Summary sum;
  sum.set("kind", std::string("weak-observability"));
  sum.set("largest_constant", worst);
  return sum;
}

}  // namespace

// --- scans -----------------------------------------------------------------

std::vector<ScanRow> frequency_localized_scan(const ScanOptions& o, Rng& rng) {
  if (!(o.h > 0.0 && o.h < 1.0)) throw ParameterError("scan needs h in (0, 1)");
  if (o.n_last < o.n_first) throw ParameterError("scan needs n_first <= n_last");
  if (std::ldexp(o.h, o.n_last) > o.epsilon0) {
    throw ParameterError("regime constraint violated: 2^n h = " +
                         std::to_string(std::ldexp(o.h, o.n_last)) + " exceeds epsilon0 = " +
                         std::to_string(o.epsilon0));
  }
  if (o.trials < 1) throw ParameterError("scan needs at least one trial");
  const LittlewoodPaley lp;
  const int kmax = static_cast<int>(std::floor((5.0 / 3.0) / std::ldexp(o.h, o.n_first)));
  const TorusGrid grid = TorusGrid::line(grid_size_for(kmax));
  const ControlProfile g(o.support, o.kind, grid);
  const double lambda = std::pow(o.h, -(o.alpha + 2.0) / 2.0);
  const DispersionParams p = DispersionParams::reduced(o.alpha, lambda);
  const Observation obs = multiplier(g);

  std::vector<ScanRow> rows;
  for (int n = o.n_first; n <= o.n_last; ++n) {
    std::vector<Mode> modes;
    std::vector<double> weight;
    for (int k = grid.k_min() + 1; k <= grid.k_max(); ++k) {
      if (k == 0) continue;
      const double w = lp.psi_n(n, o.h * k);
      if (w > 0.0) {
        modes.push_back({k, 0});
        weight.push_back(w);
      }
    }
    ScanRow row;
    row.n = n;
    row.regime = n <= -o.N0 ? "high" : (n >= o.N0 ? "low" : "critical");
    row.modes = static_cast<int>(modes.size());
    if (modes.empty()) {
      rows.push_back(row);
      continue;
    }
    const GramianBlock b = assemble_block(modes, o.T, obs, p);
    check_block(b);
    for (int trial = 0; trial < o.trials; ++trial) {
      Eigen::VectorXcd c(static_cast<Eigen::Index>(modes.size()));
      for (std::size_t i = 0; i < modes.size(); ++i) {
        const double re = standard_normal(rng);
        const double im = standard_normal(rng);
        c(i) = weight[i] * cplx(re, im);
      }
      const double q = c.dot(b.matrix * c).real();
      row.trial_max = std::max(row.trial_max, c.squaredNorm() / q);
    }
    if (modes.size() <= 512) row.sharp = 1.0 / block_eigenvalues(b)(0);
    rows.push_back(row);
  }
  return rows;
}

double weak_constant(double norm2, double observed, double remainder) {
  const double denom = observed + remainder;
  if (!(denom > 0.0)) throw DomainError("weak observability bound is degenerate for zero data");
  return norm2 / denom;
}

std::vector<WeakRow> weak_observability_diagnostic(const WeakOptions& o, Rng& rng) {
  if (o.trials < 1) throw ParameterError("diagnostic needs at least one trial");
  std::vector<WeakRow> rows;
  for (double h : o.hs) {
    if (!(h > 0.0 && h < 1.0)) throw ParameterError("weak diagnostic needs h in (0, 1)");
    const int K = std::max(1, static_cast<int>(std::floor(o.xi_max / h)));
    const TorusGrid grid = TorusGrid::line(grid_size_for(K));
    const ControlProfile g(o.support, o.kind, grid);
    const double lambda = std::pow(h, -(o.alpha + 2.0) / 2.0);
    const DispersionParams p = DispersionParams::reduced(o.alpha, lambda);
    const std::vector<Mode> modes = x_window(K, 0);
    const GramianBlock b = assemble_block(modes, o.T, multiplier(g), p);
    check_block(b);
    WeakRow row;
    row.h = h;
    row.K = K;
    row.trials = o.trials;
    double sum = 0.0;
    for (int trial = 0; trial < o.trials; ++trial) {
      const SpectralField u = random_field(grid, modes, rng);
      Eigen::VectorXcd c(static_cast<Eigen::Index>(modes.size()));
      for (std::size_t i = 0; i < modes.size(); ++i) c(i) = u(modes[i].k);
      const double norm2 = u.norm() * u.norm();
      const double observed = grid.volume() * c.dot(b.matrix * c).real();
      const double rem = std::pow(sobolev_norm(u, -1.0), 2);
      const double cval = weak_constant(norm2, observed, rem);
      row.c_max = std::max(row.c_max, cval);
      sum += cval;
    }
    row.c_mean = sum / o.trials;
    rows.push_back(row);
  }
  return rows;
}

// --- dispatch ----------------------------------------------------------------

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{
      "evolve",     "observe",           "gramian",        "control",
      "dichotomy",  "spectral-constant", "dispersion",     "frequency-scan",
      "weak-observability"};
  return kinds;
}

Summary run_section(const Section& s, OutputSink& sink, const std::string& subdir,
                    std::uint64_t seed) {
  const std::string kind = s.get_string("kind");
  Rng rng(static_cast<std::uint64_t>(s.get_int("seed", static_cast<long>(seed))));
  return with_section(s, [&]() -> Summary {
    if (kind == "evolve") return run_evolve(s, sink, subdir, rng);
    if (kind == "observe") return run_observe(s, sink, subdir);
    if (kind == "gramian") return run_gramian(s, sink, subdir);
    if (kind == "control") return run_control(s, sink, subdir, rng);
    if (kind == "dichotomy") return run_dichotomy(s, sink, subdir);
    if (kind == "spectral-constant") return run_spectral_constant(s, sink, subdir);
    if (kind == "dispersion") return run_dispersion(s, sink, subdir);
    if (kind == "frequency-scan") return run_scan(s, sink, subdir, rng);
    if (kind == "weak-observability") return run_weak(s, sink, subdir, rng);
    throw ConfigError("unknown experiment kind '" + kind + "'", s.line_of("kind"));
  });
}

std::vector<std::pair<std::string, std::string>> library_versions() {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  std::ostringstream boost;
  boost << BOOST_VERSION / 100000 << '.' << BOOST_VERSION / 100 % 1000 << '.' << BOOST_VERSION % 100;
  return {{"kpi", "0.1.0"},
          {"eigen", eigen.str()},
          {"fftw", fftw_version},
          {"boost", boost.str()},
          {"mpfr", mpfr_get_version()},
          {"openssl", OPENSSL_VERSION_TEXT}};
}

std::vector<RunRecord> run_experiment(const std::string& config_text, const RunOptions& options) {
  const Config cfg = parse_config(config_text);
  std::uint64_t seed = options.seed;
  if (!options.seed_overridden) seed = static_cast<std::uint64_t>(cfg.global.get_int("seed", 0));
  OutputFormat format = options.format;
  if (cfg.global.has("format")) {
    try {
      format = parse_format(cfg.global.get_string("format"));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), cfg.global.line_of("format"));
    }
  }
  if (options.threads > 0) {
    set_thread_count(options.threads);
  } else if (cfg.global.has("threads")) {
    set_thread_count(static_cast<unsigned>(cfg.global.get_int("threads")));
  }
  for (const Section& s : cfg.experiments) {
    const std::string kind = s.get_string("kind");
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
      throw ConfigError("unknown experiment kind '" + kind + "'", s.line_of("kind"));
    }
  }

  OutputSink sink(options.root, format);
  std::vector<RunRecord> records;
  std::vector<std::string> summaries;
  auto write_manifest = [&] {
    std::ostringstream m;
    m << "{\n  \"tool\": \"kpi-lab\",\n";
    m << "  \"config_sha256\": \"" << sha256_hex(config_text) << "\",\n";
    m << "  \"seed\": " << seed << ",\n";
    m << "  \"format\": \"" << to_string(format) << "\",\n";
    m << "  \"threads\": " << thread_count() << ",\n";
    m << "  \"versions\": {";
    const auto versions = library_versions();
    for (std::size_t i = 0; i < versions.size(); ++i) {
      m << (i ? ", " : "") << '"' << versions[i].first << "\": \"" << versions[i].second << '"';
    }
    m << "},\n  \"experiments\": [";
    for (std::size_t i = 0; i < records.size(); ++i) {
      m << (i ? "," : "") << "\n    {\"name\": \"" << records[i].name << "\", \"kind\": \""
        << records[i].kind << "\", \"status\": \"" << records[i].status
        << "\", \"seconds\": " << format_double(records[i].seconds) << "}";
    }
    m << (records.empty() ? "" : "\n  ") << "],\n  \"files\": [";
    const auto& files = sink.artifacts();
    for (std::size_t i = 0; i < files.size(); ++i) {
      m << (i ? "," : "") << "\n    {\"path\": \"" << files[i].path << "\", \"sha256\": \""
        << files[i].sha256 << "\", \"bytes\": " << files[i].bytes << "}";
    }
    m << (files.empty() ? "" : "\n  ") << "]\n}\n";
    std::ofstream out(options.root / "manifest.json", std::ios::binary);
    out << m.str();
  };

  for (const Section& s : cfg.experiments) {
    RunRecord rec{s.name(), s.get_string("kind"), "ok", 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      const Summary sum = run_section(s, sink, s.name(), seed);
      sink.write_summary(s.name(), sum);
    } catch (...) {
      rec.status = "failed";
      rec.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      records.push_back(rec);
      write_manifest();
      throw;
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    records.push_back(rec);
  }
  write_manifest();
  return records;
}

}  // namespace kpi
