#pragma once

// Nonnegative bump g with unit integral that defines the control operator
// G h = g (h - \int g h). Samples and coefficients are held on a 1D grid;
// a profile acts on the x axis (vertical control) or the y axis (horizontal).

#include <string>
#include <utility>
#include <vector>

#include "kpi/fourier.hpp"

namespace kpi {

enum class ProfileKind {
  /// exp(-1 / (1 - s^2)) in the rescaled variable s in (-1, 1); C^infinity.
  SmoothExp,
  /// sin^4 of the rescaled variable; C^3.
  HannSquared,
};

ProfileKind parse_profile_kind(const std::string& name);
std::string to_string(ProfileKind kind);

struct Interval {
  double a;
  double b;
};

class ControlProfile {
public:
  /// Single support interval. Throws ParameterError unless -pi <= a < b <= pi.
  ControlProfile(Interval support, ProfileKind kind, const TorusGrid& grid);
  /// Several disjoint intervals, one bump each, jointly normalized.
  ControlProfile(std::vector<Interval> support, ProfileKind kind, const TorusGrid& grid);

  const std::vector<Interval>& support() const noexcept { return support_; }
  ProfileKind kind() const noexcept { return kind_; }
  /// 1D grid carrying the samples.
  const TorusGrid& grid() const noexcept { return grid_; }
  /// Factor applied to the raw bump so that the grid quadrature of g is 1.
  double normalization() const noexcept { return normalization_; }
  const std::vector<double>& samples() const noexcept { return samples_; }

  /// Coefficient of g at cyclic frequency m (any integer, reduced mod nx).
  cplx g_hat(int m) const;
  /// Coefficient of g^2 at cyclic frequency m.
  cplx g2_hat(int m) const;

  /// Unnormalized bump value at x (x taken mod 2 pi into [-pi, pi)).
  double raw(double x) const;
  /// Normalized g(x).
  double operator()(double x) const { return normalization_ * raw(x); }

  /// Grid quadrature of g and g^2.
  double integral() const;
  double integral_of_square() const;

private:
  void build();

  std::vector<Interval> support_;
  ProfileKind kind_;
  TorusGrid grid_;
  double normalization_ = 1.0;
  std::vector<double> samples_;
  std::vector<cplx> g_hat_;
  std::vector<cplx> g2_hat_;
};

/// Default region of the experiments: smooth-exp on (pi/4, 3pi/4).
ControlProfile default_profile(const TorusGrid& grid);

/// Profile supported in (-pi, -beta) U (beta, pi), hann-squared on each piece.
ControlProfile exterior_profile(double beta, const TorusGrid& grid);

}  // namespace kpi
