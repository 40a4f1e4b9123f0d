#include <gtest/gtest.h>

#include <cmath>

#include "kpi/control_profile.hpp"
#include "kpi/errors.hpp"

using namespace kpi;

TEST(ControlProfile, NormalizedNonnegativeSupported) {
  const TorusGrid g = TorusGrid::line(256);
  for (ProfileKind kind : {ProfileKind::SmoothExp, ProfileKind::HannSquared}) {
    const ControlProfile p({kPi / 4, 3 * kPi / 4}, kind, g);
    EXPECT_NEAR(p.integral(), 1.0, 1e-10);
    for (int j = 0; j < g.nx(); ++j) {
      const double x = g.x(j);
      EXPECT_GE(p(x), 0.0);
      if (x <= kPi / 4 || x >= 3 * kPi / 4) EXPECT_EQ(p(x), 0.0) << x;
    }
  }
}

TEST(ControlProfile, FullSupportHann) {
  const ControlProfile p({-kPi, kPi}, ProfileKind::HannSquared, TorusGrid::line(64));
  EXPECT_NEAR(p.integral(), 1.0, 1e-12);
  EXPECT_GT(p(0.0), 0.0);
}

TEST(ControlProfile, MeanCoefficient) {
  for (int nx : {64, 1024}) {
    const ControlProfile p = default_profile(TorusGrid::line(nx));
    EXPECT_NEAR(p.g_hat(0).real(), 1.0 / kTwoPi, 1e-12);
    EXPECT_NEAR(p.g2_hat(0).real() * kTwoPi, p.integral_of_square(), 1e-12);
  }
}

TEST(ControlProfile, SmoothExpDecay) {
  const ControlProfile p = default_profile(TorusGrid::line(1024));
  // Stretched-exponential decay: faster than any fixed power at large k.
  EXPECT_LE(std::abs(p.g_hat(256)) / std::abs(p.g_hat(8)), 1e-6);
  const auto k4 = [&](int k) { return std::abs(p.g_hat(k)) * std::pow(double(k), 4); };
  EXPECT_LE(k4(400), 0.1 * k4(64));
}

TEST(ControlProfile, CoefficientsAreConjugateSymmetricAndCyclic) {
  const ControlProfile p = default_profile(TorusGrid::line(128));
  for (int m = 1; m < 40; ++m) {
    EXPECT_NEAR(std::abs(p.g_hat(-m) - std::conj(p.g_hat(m))), 0.0, 1e-16);
    EXPECT_EQ(p.g2_hat(m), p.g2_hat(m + 128));
  }
}

TEST(ControlProfile, Errors) {
  const TorusGrid g = TorusGrid::line(64);
  EXPECT_THROW(ControlProfile({1.0, 1.0}, ProfileKind::SmoothExp, g), ParameterError);
  EXPECT_THROW(ControlProfile({1.0, 0.5}, ProfileKind::SmoothExp, g), ParameterError);
  EXPECT_THROW(ControlProfile({-4.0, 0.5}, ProfileKind::SmoothExp, g), ParameterError);
  EXPECT_THROW(ControlProfile(Interval{0.0, 1.0}, ProfileKind::SmoothExp, TorusGrid::plane(16, 8)),
               DimensionError);
  EXPECT_THROW(parse_profile_kind("triangle"), ParameterError);
  EXPECT_EQ(parse_profile_kind("hann-squared"), ProfileKind::HannSquared);
  EXPECT_EQ(to_string(ProfileKind::SmoothExp), "smooth-exp");
}

TEST(ControlProfile, ExteriorRegion) {
  const TorusGrid g = TorusGrid::line(256);
  const ControlProfile p = exterior_profile(kPi / 4, g);
  EXPECT_NEAR(p.integral(), 1.0, 1e-12);
  EXPECT_EQ(p(0.0), 0.0);
  EXPECT_EQ(p(0.7), 0.0);
  EXPECT_GT(p(2.0), 0.0);
  EXPECT_GT(p(-2.0), 0.0);
  EXPECT_NEAR(p(2.0), p(-2.0), 1e-14);
}
