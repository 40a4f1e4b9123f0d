#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kpi/dispersion.hpp"
#include "kpi/errors.hpp"

using namespace kpi;

TEST(Omega, Examples) {
  const auto p = DispersionParams::full(2.0);
  EXPECT_DOUBLE_EQ(omega(1, 0, p), 1.0);
  EXPECT_DOUBLE_EQ(omega(2, 3, p), 12.5);
  EXPECT_DOUBLE_EQ(omega(-1, 1, p), -2.0);
  EXPECT_THROW(omega(0, 1, p), DomainError);
}

TEST(Omega, ReducedUsesLambda) {
  const auto p = DispersionParams::reduced(2.0, 3.0);
  EXPECT_DOUBLE_EQ(omega(2, 0, p), 8.0 + 9.0 / 2.0);
}

TEST(Omega, Odd) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto p = DispersionParams::full(alpha);
    for (int k = 1; k < 40; k += 3)
      for (int l = -9; l <= 9; ++l) EXPECT_DOUBLE_EQ(omega(-k, l, p), -omega(k, l, p));
  }
}

TEST(Params, Validation) {
  EXPECT_THROW(DispersionParams::full(0.0), ParameterError);
  EXPECT_THROW(DispersionParams::reduced(2.0, -1.0), ParameterError);
  EXPECT_THROW(DispersionParams::full(-1.0), ParameterError);
}

TEST(GroupVelocity, Examples) {
  EXPECT_NEAR(group_velocity(1.0, DispersionParams::reduced(2.0, 1.0)), 2.0, 1e-15);
  EXPECT_NEAR(group_velocity(std::pow(3.0, -0.25), DispersionParams::reduced(2.0, 1.0)), 0.0,
              1e-12);
  EXPECT_NEAR(group_velocity(std::pow(2.0, -1.0 / 3.0), DispersionParams::reduced(1.0, 1.0)),
              0.0, 1e-12);
  EXPECT_THROW(group_velocity(0.0, DispersionParams::reduced(2.0, 1.0)), DomainError);
}

TEST(GroupVelocity, MatchesFiniteDifferences) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> xi_d(0.1, 10.0), a_d(0.3, 2.0), l_d(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double xi = xi_d(rng);
    const auto p = DispersionParams::reduced(a_d(rng), l_d(rng));
    const double h = 1e-5;
    const double fd = (symbol(xi + h, p) - symbol(xi - h, p)) / (2 * h);
    EXPECT_NEAR(group_velocity(xi, p), fd, 1e-6 * std::max(1.0, std::abs(fd))) << xi;
  }
}

TEST(GroupVelocity, SignChangesAtCriticalPoint) {
  const auto p = DispersionParams::reduced(2.0, 1.0);
  const double xi0 = critical_points(p)->first.xi0;
  for (int i = 1; i <= 50; ++i) {
    EXPECT_LT(group_velocity(xi0 * i / 51.0, p), 0.0);
    EXPECT_GT(group_velocity(xi0 * (1.0 + i / 10.0), p), 0.0);
  }
}

TEST(CriticalPoints, Examples) {
  auto cp = critical_points(DispersionParams::reduced(2.0, 1.0));
  ASSERT_TRUE(cp);
  EXPECT_NEAR(cp->first.xi0, std::pow(3.0, -0.25), 1e-15);
  EXPECT_NEAR(cp->second.xi0, -std::pow(3.0, -0.25), 1e-15);
  EXPECT_NEAR(critical_points(DispersionParams::reduced(2.0, 2.0))->first.xi0, 1.0745699318,
              1e-9);
  EXPECT_NEAR(critical_points(DispersionParams::reduced(1.0, 1.0))->first.xi0,
              std::pow(2.0, -1.0 / 3.0), 1e-15);
  EXPECT_FALSE(critical_points(DispersionParams::reduced(2.0, 0.0)));
}

TEST(CriticalPoints, SecondDerivative) {
  const auto cp = critical_points(DispersionParams::reduced(2.0, 1.0))->first;
  EXPECT_NEAR(cp.phi_pp, 12.0 / std::pow(3.0, 0.25), 1e-12);
  EXPECT_NEAR(cp.a0, cp.phi_pp / 2.0, 1e-15);

  const auto p1 = DispersionParams::reduced(1.0, 1.0);
  const auto c1 = critical_points(p1)->first;
  const double h = 1e-4;
  const double fd =
      (symbol(c1.xi0 + h, p1) - 2 * symbol(c1.xi0, p1) + symbol(c1.xi0 - h, p1)) / (h * h);
  EXPECT_NEAR(c1.a0, fd / 2.0, 1e-5);
}

TEST(SemiclassicalTranslation, Frame) {
  const auto p = DispersionParams::reduced(2.0, 1.0);
  for (double h : {0.1, 0.037, 1.0 / 64.0}) {
    const SemiclassicalFrame f = semiclassical_translation(h, p);
    EXPECT_GE(f.sigma_h, 0.0);
    EXPECT_LT(f.sigma_h, h);
    EXPECT_EQ(f.r_h, f.sigma_h / h);
    EXPECT_EQ(f.shift, static_cast<long>(std::floor(f.critical.xi0 / h)));
    EXPECT_NEAR(f.phi_pp_at_sigma, 12.0 / std::pow(3.0, 0.25), 1e-12);
    EXPECT_NEAR(f.translated_symbol(f.sigma_h, p), 0.0, 1e-12);
  }
  EXPECT_THROW(semiclassical_translation(0.0, p), ParameterError);
  EXPECT_THROW(semiclassical_translation(1.0, p), ParameterError);
}

TEST(MuPair, Examples) {
  auto [a, b] = mu_pair(0.0);
  EXPECT_EQ(a, 0.5);
  EXPECT_EQ(b, 0.5);
  std::tie(a, b) = mu_pair(0.3);
  EXPECT_NEAR(a, 0.3, 1e-15);
  EXPECT_NEAR(b, 0.3, 1e-15);
  std::tie(a, b) = mu_pair(0.45);
  EXPECT_NEAR(a, 0.45, 1e-15);
  EXPECT_NEAR(b, 0.45, 1e-15);
  EXPECT_THROW(mu_pair(1.0), ParameterError);
  EXPECT_THROW(mu_pair(-0.1), ParameterError);
}

TEST(MuPair, RangeAndModIdentity) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> r_d(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double r = r_d(rng);
    const auto [m1, m2] = mu_pair(r);
    EXPECT_GE(m1, 0.125);
    EXPECT_LE(m1, 0.875);
    EXPECT_GE(m2, 0.125);
    EXPECT_LE(m2, 0.875);
    const double d = (m1 + m2) - 2.0 * r;
    EXPECT_NEAR(d - std::round(d), 0.0, 1e-12) << r;
  }
}
