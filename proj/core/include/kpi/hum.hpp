#pragma once

// Exact controllability on a truncated window W by the Hilbert Uniqueness
// Method. For the controlled system u' = L u + P_W G f the control of least
// L^2((0,T); L^2) norm steering u0 to u1 is
//
//     f(t) = G S(t - T) phi_T,    Lambda_T phi_T = u1 - S(T) u0,
//     Lambda_T = \int_0^T S(s) P_W G^2 S(-s) ds.
//
// Lambda_T is block diagonal (per l for vertical control, per k for
// horizontal), so each block is solved independently.

#include <optional>
#include <vector>

#include "kpi/dispersion.hpp"
#include "kpi/fourier.hpp"
#include "kpi/observability.hpp"

namespace kpi {

/// Window k in [-K, K] \ {0}, l in [-L, L] (l = 0 only on 1D grids).
std::vector<Mode> hum_window(const TorusGrid& grid, int K, int L);

/// Every non-Nyquist mode with k != 0.
std::vector<Mode> full_window(const TorusGrid& grid);

/// Lambda_T as a set of dense blocks over a fixed window.
class HumOperator {
public:
  HumOperator(const TorusGrid& grid, std::vector<Mode> window, double T, Observation obs,
              DispersionParams p);

  SpectralField apply(const SpectralField& v) const;
  const std::vector<GramianBlock>& blocks() const noexcept { return blocks_; }
  const std::vector<Mode>& window() const noexcept { return window_; }
  const TorusGrid& grid() const noexcept { return grid_; }
  double horizon() const noexcept { return horizon_; }
  const Observation& observation() const noexcept { return obs_; }
  const DispersionParams& params() const noexcept { return p_; }

private:
  TorusGrid grid_;
  std::vector<Mode> window_;
  double horizon_;
  Observation obs_;
  DispersionParams p_;
  std::vector<GramianBlock> blocks_;
};

/// Lambda_T v over the full window of v's grid. v must be mean-zero.
SpectralField hum_gramian_apply(const SpectralField& v, double T, const Observation& obs,
                                const DispersionParams& p);

struct HumOptions {
  double tol = 1e-10;
  int max_iter = 500;
  /// Uniform export nodes on [0, T], endpoints included.
  int sample_nodes = 256;
  /// Window; the full grid window when empty.
  std::vector<Mode> window;
};

struct ControlTrajectory {
  double horizon = 0.0;
  SpectralField adjoint;
  Observation observation;
  DispersionParams params;
  std::vector<Mode> window;
  std::vector<double> times;
  std::vector<SpectralField> samples;
  int iterations = 0;
  /// Jacobi-scaled relative residual after each iteration (entry 0 = start).
  std::vector<double> residual_history;
  /// Unscaled relative residual ||Lambda phi - b|| / ||b|| at exit.
  double final_residual = 0.0;

  /// f(t) = G S(t - T) phi_T, evaluated through the physical grid.
  SpectralField control_at(double t) const;
};

/// Solves Lambda_T phi = P_W(u1 - S(T) u0) by Jacobi-scaled conjugate
/// residuals, all blocks in lockstep. Throws NonConvergenceError (with the
/// residual history) on breakdown or when max_iter is exhausted.
ControlTrajectory synthesize_control(const SpectralField& u0, const SpectralField& u1,
                                     double T, const Observation& obs,
                                     const DispersionParams& p, const HumOptions& options = {});

/// Terminal state of u' = L u + P_W G f(t) by RK4 in the interaction picture
/// v = S(-t) u, with f re-derived from the synthesis rule at every stage.
/// steps = 0 picks a step count resolving the window's frequency spread.
SpectralField verify_control(const SpectralField& u0, const ControlTrajectory& traj,
                             const DispersionParams& p, int steps = 0);

/// Step count used by verify_control when steps = 0.
int default_verification_steps(const ControlTrajectory& traj, const DispersionParams& p);

/// \int_0^T ||f||^2 dt by composite Gauss-Legendre through the physical grid.
double control_cost(const ControlTrajectory& traj, int panels = 0);

}  // namespace kpi
