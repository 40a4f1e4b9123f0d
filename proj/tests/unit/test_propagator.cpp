#include <gtest/gtest.h>

#include <cmath>

#include "kpi/dispersion.hpp"
#include "kpi/errors.hpp"
#include "kpi/fourier.hpp"
#include "kpi/propagator.hpp"
#include "kpi/random_fields.hpp"
#include "test_support.hpp"

using namespace kpi;

namespace {
const DispersionParams kp = DispersionParams::full(2.0);
}

TEST(Evolve, ZeroTimeIsBitwiseIdentity) {
  Rng rng(1);
  const SpectralField u = random_field(TorusGrid::plane(64, 16), rng);
  EXPECT_EQ(evolve(u, 0.0, kp), u);
}

TEST(Evolve, PeriodicSingleMode) {
  const TorusGrid g = TorusGrid::plane(16, 8);
  const SpectralField u = test::single_mode(g, 1, 1);
  EXPECT_LE(max_abs_difference(evolve(u, kPi, kp), u), 1e-13);
}

TEST(Evolve, RejectsMeanAndNamesL) {
  const TorusGrid g = TorusGrid::plane(16, 8);
  SpectralField u = test::single_mode(g, 2, 1);
  u(0, -2) = 0.5;
  try {
    evolve(u, 1.0, kp);
    FAIL();
  } catch (const ConstraintError& e) {
    EXPECT_NE(std::string(e.what()).find("l = -2"), std::string::npos);
  }
}

TEST(Evolve, DimensionMustMatchMode) {
  Rng rng(2);
  const SpectralField u1 = random_field(TorusGrid::line(32), rng);
  EXPECT_THROW(evolve(u1, 1.0, kp), ParameterError);
  const SpectralField u2 = random_field(TorusGrid::plane(32, 8), rng);
  EXPECT_THROW(evolve(u2, 1.0, DispersionParams::reduced(2.0, 1.0)), ParameterError);
}

TEST(Evolve, UnitaryGroupLawAndReversal) {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const SpectralField u = random_field(TorusGrid::plane(128, 32), rng);
    for (double t : {0.1, 1.0, 10.0}) {
      const SpectralField ut = evolve(u, t, kp);
      EXPECT_NEAR(ut.norm(), u.norm(), 1e-12 * u.norm());
      EXPECT_LE(max_abs_difference(evolve(ut, -t, kp), u), 1e-12);
      // Rounding of t + 0.37 alone moves phases by ~eps * t * max|omega|.
      EXPECT_LE(max_abs_difference(evolve(ut, 0.37, kp), evolve(u, t + 0.37, kp)), 1e-11);
    }
  }
}

TEST(Evolve, NyquistIsZeroed) {
  const TorusGrid g = TorusGrid::plane(16, 8);
  SpectralField u = test::single_mode(g, 3, 1);
  u(-8, 1) = 1.0;
  u(2, -4) = 1.0;
  const SpectralField v = evolve(u, 0.5, kp);
  EXPECT_EQ(v(-8, 1), cplx(0.0));
  EXPECT_EQ(v(2, -4), cplx(0.0));
}

TEST(Evolve, LargePhasesAreReduced) {
  // t w ~ 1e9: the reduced phase must agree with a long double reference.
  const TorusGrid g = TorusGrid::line(2048);
  const auto p = DispersionParams::reduced(2.0, 0.0);
  const SpectralField u = test::single_mode(g, 1000);
  const double t = 1.0 + 1.0 / 3.0;
  const long double w = 1.0e9L;
  const long double ph = std::fmod(static_cast<long double>(t) * w, 2.0L * 3.14159265358979323846264338327950288L);
  const cplx expect(static_cast<double>(std::cos(ph)), static_cast<double>(std::sin(ph)));
  EXPECT_LE(std::abs(evolve(u, t, p)(1000) - expect), 1e-9);
}

TEST(EvolveModes, MatchesEvolve) {
  Rng rng(4);
  for (int i = 0; i < 5; ++i) {
    const SpectralField u = random_field(TorusGrid::plane(128, 32), rng);
    EXPECT_LE(max_abs_difference(evolve_modes(u, 0.9, 2.0), evolve(u, 0.9, kp)), 1e-13);
    EXPECT_LE(max_abs_difference(evolve_modes(u, 0.9, 0.5), evolve(u, 0.9, DispersionParams::full(0.5))),
              1e-13);
  }
}

TEST(EvolveModes, Examples) {
  const TorusGrid g = TorusGrid::plane(16, 8);
  const SpectralField u = test::single_mode(g, 1, 2);
  EXPECT_LE(std::abs(evolve_modes(u, 1.0, 2.0)(1, 2) - std::polar(1.0, 5.0)), 1e-15);
  const SpectralField v = test::single_mode(g, 3, 0);
  EXPECT_LE(std::abs(evolve_modes(v, 0.2, 2.0)(3, 0) - std::polar(1.0, 0.2 * 27.0)), 1e-15);
}

TEST(EvolveSemiclassical, IdentityAndGauge) {
  const auto p = DispersionParams::reduced(2.0, 1.0);
  const TorusGrid g = TorusGrid::line(64);
  Rng rng(5);
  const double h = 1.0 / 16.0;
  const SemiclassicalFrame f = semiclassical_translation(h, p);
  const std::vector<Mode> modes{{1, 0}, {3, 0}, {-2, 0}, {5, 0}};
  SpectralField w = random_field(g, modes, rng);
  EXPECT_EQ(evolve_semiclassical(w, 0.0, h, p), w);
  // The translated critical mode sits at sigma_h, where the gauged phase vanishes.
  EXPECT_NEAR(f.translated_symbol(f.sigma_h, p), 0.0, 1e-13);
}

TEST(EvolveSemiclassical, MatchesRescaledEvolution) {
  // w(k) lives at frequency k + shift of the unscaled equation with lambda = h^{-(a+2)/2}.
  const double alpha = 2.0, h = 1.0 / 16.0, t = 0.3;
  const auto p = DispersionParams::reduced(alpha, 1.0);
  const SemiclassicalFrame f = semiclassical_translation(h, p);
  const TorusGrid gw = TorusGrid::line(32);
  const TorusGrid gv = TorusGrid::line(64);
  Rng rng(6);
  std::vector<Mode> modes;
  for (int k = -6; k <= 6; ++k)
    if (k != 0 && k != -f.shift) modes.push_back({k, 0});
  const SpectralField w = random_field(gw, modes, rng);
  SpectralField v(gv);
  for (const Mode& m : modes) v(m.k + static_cast<int>(f.shift)) = w(m.k);
  const auto pv = DispersionParams::reduced(alpha, std::pow(h, -(alpha + 2.0) / 2.0));
  // omega(m) = h^{-(1+alpha)} phi(h m), so both clocks agree.
  const double s = t;
  const SpectralField ws = evolve_semiclassical(w, t, h, p);
  const SpectralField vs = evolve(v, s, pv);
  // Remove the gauge phase and compare.
  const cplx gauge = std::polar(1.0, -t * f.gauge / std::pow(h, 1.0 + alpha));
  for (const Mode& m : modes) {
    const cplx a = ws(m.k);
    const cplx b = vs(m.k + static_cast<int>(f.shift)) * gauge;
    EXPECT_LE(std::abs(a - b), 1e-10) << m.k;
  }
}

TEST(Rk4Reference, TaylorSingleStep) {
  const auto p = DispersionParams::reduced(2.0, 0.0);
  const TorusGrid g = TorusGrid::line(16);
  const SpectralField u = test::single_mode(g, 1);
  const double t = 1e-2;
  const cplx z(0.0, t);
  const cplx taylor = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
  EXPECT_LE(std::abs(rk4_reference_evolve(u, t, 1, p)(1) - taylor), 1e-16);
}

TEST(Rk4Reference, FourthOrderConvergence) {
  Rng rng(7);
  const TorusGrid g = TorusGrid::plane(16, 8);
  const SpectralField u = random_field(g, rng, 3, 2);
  const SpectralField exact = evolve(u, 0.7, kp);
  const double e1 = max_abs_difference(rk4_reference_evolve(u, 0.7, 200, kp), exact);
  const double e2 = max_abs_difference(rk4_reference_evolve(u, 0.7, 400, kp), exact);
  EXPECT_NEAR(e1 / e2, 16.0, 1.5);
  EXPECT_LE(max_abs_difference(rk4_reference_evolve(u, 0.7, 10000, kp), exact), 1e-8);
  EXPECT_THROW(rk4_reference_evolve(u, 0.7, 0, kp), ParameterError);
}

TEST(Evolve, CommutesWithLittlewoodPaley) {
  Rng rng(8);
  const auto p = DispersionParams::reduced(2.0, 5.0);
  const SpectralField u = random_field(TorusGrid::line(256), rng);
  for (int n = -1; n <= 3; ++n) {
    EXPECT_LE(max_abs_difference(littlewood_paley_block(evolve(u, 0.4, p), n, 0.05),
                                 evolve(littlewood_paley_block(u, n, 0.05), 0.4, p)),
              1e-16);
  }
}
