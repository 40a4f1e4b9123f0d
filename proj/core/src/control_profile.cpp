#include "kpi/control_profile.hpp"

#include <algorithm>
#include <cmath>

#include "kpi/errors.hpp"
#include "profile_shape.hpp"

namespace kpi {

namespace {

inline int wrap(int k, int n) { return ((k % n) + n) % n; }

void validate(const std::vector<Interval>& support) {
  if (support.empty()) throw ParameterError("control profile needs a support interval");
  for (const Interval& iv : support) {
    if (!(iv.a < iv.b) || iv.a < -kPi || iv.b > kPi) {
      throw ParameterError("control support must satisfy -pi <= a < b <= pi, got (" +
                           std::to_string(iv.a) + ", " + std::to_string(iv.b) + ")");
    }
  }
  auto sorted = support;
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& l, const Interval& r) { return l.a < r.a; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].a < sorted[i - 1].b) throw ParameterError("support intervals overlap");
  }
}

}  // namespace

ProfileKind parse_profile_kind(const std::string& name) {
  if (name == "smooth-exp") return ProfileKind::SmoothExp;
  if (name == "hann-squared") return ProfileKind::HannSquared;
  throw ParameterError("unknown profile kind '" + name + "'");
}

std::string to_string(ProfileKind kind) {
  return kind == ProfileKind::SmoothExp ? "smooth-exp" : "hann-squared";
}

ControlProfile::ControlProfile(Interval support, ProfileKind kind, const TorusGrid& grid)
    : ControlProfile(std::vector<Interval>{support}, kind, grid) {}

ControlProfile::ControlProfile(std::vector<Interval> support, ProfileKind kind,
                               const TorusGrid& grid)
    : support_(std::move(support)), kind_(kind), grid_(grid) {
  if (grid_.dimension() != 1) throw DimensionError("control profiles live on a 1D grid");
  validate(support_);
  build();
}

double ControlProfile::raw(double x) const {
  double y = std::fmod(x + kPi, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  y -= kPi;
  double v = 0.0;
  for (const Interval& iv : support_) v += detail::bump<double>(kind_, y, iv.a, iv.b);
  return v;
}

void ControlProfile::build() {
  const int n = grid_.nx();
  samples_.assign(n, 0.0);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    samples_[j] = raw(grid_.x(j));
    sum += samples_[j];
  }
  if (!(sum > 0.0)) {
    throw ParameterError("control support contains no grid node; refine the grid");
  }
  normalization_ = 1.0 / (grid_.cell_volume() * sum);
  for (double& v : samples_) v *= normalization_;

  std::vector<cplx> g(samples_.begin(), samples_.end());
  std::vector<cplx> g2(n);
  for (int j = 0; j < n; ++j) g2[j] = samples_[j] * samples_[j];
  const SpectralField gf = forward_transform(g, grid_);
  const SpectralField g2f = forward_transform(g2, grid_);
  g_hat_.assign(n, 0.0);
  g2_hat_.assign(n, 0.0);
  for (int k = grid_.k_min(); k <= grid_.k_max(); ++k) {
    g_hat_[wrap(k, n)] = gf(k);
    g2_hat_[wrap(k, n)] = g2f(k);
  }
}

cplx ControlProfile::g_hat(int m) const { return g_hat_[wrap(m, grid_.nx())]; }
cplx ControlProfile::g2_hat(int m) const { return g2_hat_[wrap(m, grid_.nx())]; }

double ControlProfile::integral() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s * grid_.cell_volume();
}

double ControlProfile::integral_of_square() const {
  double s = 0.0;
  for (double v : samples_) s += v * v;
  return s * grid_.cell_volume();
}

ControlProfile default_profile(const TorusGrid& grid) {
  const TorusGrid line = grid.dimension() == 1 ? grid : grid.x_axis();
  return ControlProfile(Interval{kPi / 4.0, 3.0 * kPi / 4.0}, ProfileKind::SmoothExp, line);
}

ControlProfile exterior_profile(double beta, const TorusGrid& grid) {
  if (!(beta > 0.0 && beta < kPi)) throw ParameterError("beta must lie in (0, pi)");
  const TorusGrid line = grid.dimension() == 1 ? grid : grid.x_axis();
  return ControlProfile({Interval{-kPi, -beta}, Interval{beta, kPi}},
                        ProfileKind::HannSquared, line);
}

}  // namespace kpi
