#include <gtest/gtest.h>

#include <cmath>

#include "kpi/control_profile.hpp"
#include "kpi/errors.hpp"
#include "kpi/random_fields.hpp"
#include "kpi/spectral_constant.hpp"

using namespace kpi;

TEST(SpectralConstant, OrderZeroIsInverseMassOfSquare) {
  for (ProfileKind kind : {ProfileKind::SmoothExp, ProfileKind::HannSquared}) {
    const ControlProfile g({0.3, 1.4}, kind, TorusGrid::line(256));
    const SpectralConstant c = spectral_constant(g, 0);
    EXPECT_NEAR(c.kappa * g.integral_of_square(), 1.0, 1e-10);
    EXPECT_EQ(c.m0, 0);
  }
}

TEST(SpectralConstant, GramIsHermitianToeplitz) {
  const ControlProfile g = default_profile(TorusGrid::line(128));
  const Eigen::MatrixXcd m = spectral_gram(g, 4);
  ASSERT_EQ(m.rows(), 9);
  EXPECT_LE((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  for (int i = 1; i < 9; ++i)
    for (int j = 1; j < 9; ++j) EXPECT_EQ(m(i, j), m(i - 1, j - 1));
}

TEST(SpectralConstant, NondecreasingAndRayleighSharp) {
  const ControlProfile g = default_profile(TorusGrid::line(256));
  double prev = 0.0;
  for (int m0 = 0; m0 <= 8; ++m0) {
    const SpectralConstant c = spectral_constant(g, m0);
    EXPECT_GE(c.kappa, prev);
    prev = c.kappa;
    // The extremal vector attains the bound. In double precision the quotient
    // carries ~1e-16 absolute error, so only check where lambda_min is large.
    if (c.lambda_min < 1e-9) continue;
    const Eigen::MatrixXcd m = spectral_gram(g, m0);
    const Eigen::VectorXcd& v = c.extremal;
    ASSERT_EQ(v.size(), 2 * m0 + 1);
    const double q = v.dot(m * v).real() / v.squaredNorm();
    EXPECT_NEAR(q * c.kappa, 1.0, 1e-6);
  }
}

TEST(SpectralConstant, RandomPolynomialsSatisfyInequality) {
  const TorusGrid grid = TorusGrid::line(256);
  const ControlProfile g = default_profile(grid);
  Rng rng(99);
  for (int m0 : {1, 3, 6}) {
    const double kappa = spectral_constant(g, m0).kappa;
    for (int t = 0; t < 50; ++t) {
      std::vector<cplx> c(2 * m0 + 1);
      double lhs = 0.0;
      for (auto& z : c) {
        z = cplx(standard_normal(rng), standard_normal(rng));
        lhs += std::norm(z);
      }
      double rhs = 0.0;
      for (int j = 0; j < grid.nx(); ++j) {
        cplx p = 0.0;
        for (int k = -m0; k <= m0; ++k) p += c[k + m0] * std::polar(1.0, k * grid.x(j));
        rhs += std::norm(g.samples()[j] * p);
      }
      rhs *= grid.cell_volume();
      EXPECT_LE(lhs, kappa * rhs * (1 + 1e-8));
    }
  }
}

TEST(SpectralConstant, Errors) {
  const ControlProfile g = default_profile(TorusGrid::line(32));
  EXPECT_THROW(spectral_constant(g, -1), ParameterError);
  EXPECT_THROW(spectral_constant(g, 20), ParameterError);
}

TEST(SpectralConstant, NarrowSupportHitsInfiniteConstant) {
  // Few grid nodes in the support: the discrete Gram is singular for large m0.
  const ControlProfile g({0.0, 0.2}, ProfileKind::HannSquared, TorusGrid::line(64));
  EXPECT_THROW(spectral_constant(g, 12), NumericalConsistencyError);
}
