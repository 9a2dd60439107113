#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "qplr/cocycle.hpp"
#include "qplr/error.hpp"
#include "qplr/spectral.hpp"

namespace {

using qplr::Complex;

const auto kAlpha = qplr::FrequencyVector::golden();
const auto kFree = qplr::Potential::zero();
const auto kHalf = qplr::Potential::almost_mathieu(0.5);

TEST(Transfer, Examples) {
  Eigen::Matrix2d rot;
  rot << 0, -1, 1, 0;
  EXPECT_EQ(qplr::transfer(kFree, kAlpha, 0.0, 0.37), rot);
  EXPECT_LT((qplr::transfer(qplr::Potential::almost_mathieu(1.0), kAlpha, 2.0, 0.0) - rot).norm(), 1e-15);
}

TEST(Transfer, UnitDeterminant) {
  gen::for_all(50, 10, [](gen::Gen& g) {
    const auto p = g.potential(3, 2.0);
    EXPECT_NEAR(qplr::transfer(p, kAlpha, g.uniform(-6, 6), g.uniform(0, 1)).determinant(), 1.0, 1e-13);
  });
}

TEST(Transfer, ProductsKeepUnitDeterminant) {
  // Elliptic free cocycle: the raw product stays bounded.
  gen::for_all(5, 20, [](gen::Gen& g) {
    const double e = g.uniform(-1.9, 1.9);
    Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
    for (int j = 0; j < 100000; ++j) m = qplr::transfer(kFree, kAlpha, e, 0.0) * m;
    EXPECT_NEAR(m.determinant(), 1.0, 1e-10);
  });
  // Renormalized accumulation: det of the scaled frame equals exp(-2 log scale)
  // up to the rounding of its entries.
  gen::for_all(5, 25, [](gen::Gen& g) {
    const auto p = g.potential(2, 1.0);
    const double e = g.uniform(-4, 4);
    const double x = g.uniform(0, 1);
    Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
    double log_scale = 0.0;
    for (int j = 0; j < 2000; ++j) {
      m = qplr::transfer(p, kAlpha, e, x + j * kAlpha[0]) * m;
      const double s = m.norm();
      m /= s;
      log_scale += std::log(s);
    }
    EXPECT_NEAR(m.determinant(), std::exp(-2.0 * log_scale), 1e-13);
  });
}

TEST(Cocycle, RejectsShortOrbits) {
  EXPECT_THROW(qplr::lyapunov(kFree, kAlpha, 0.0, 0.0, 999), qplr::InvalidArgument);
}

TEST(Lyapunov, FreeValues) {
  EXPECT_NEAR(qplr::lyapunov(kFree, kAlpha, 0.0, 0.0, 100000).value, 0.0, 1e-3);
  EXPECT_NEAR(qplr::lyapunov(kFree, kAlpha, 3.0, 0.0, 100000).value, std::log((3.0 + std::sqrt(5.0)) / 2.0), 1e-3);
}

TEST(Lyapunov, AubryAndreValue) {
  EXPECT_NEAR(qplr::lyapunov(qplr::Potential::almost_mathieu(2.0), kAlpha, 0.0, 0.0, 100000).value, std::log(2.0),
              0.02);
}

TEST(Lyapunov, VanishesOnSubcriticalSpectrum) {
  const auto levels = qplr::pooled_levels(kHalf, kAlpha, 512, {qplr::PhaseMode::equidistributed, 4, 0});
  const qplr::QuantileFunction energy(levels);
  for (double n : {0.1, 0.25, 0.5, 0.7, 0.9}) {
    SCOPED_TRACE(n);
    EXPECT_LT(qplr::lyapunov(kHalf, kAlpha, energy(n), 0.0, 100000).value, 0.02);
  }
}

TEST(Rotation, FreeValues) {
  EXPECT_NEAR(qplr::rotation_number(kFree, kAlpha, 0.0, 0.0, 100000).value, 0.25, 1e-3);
  for (double e : {2.0, 2.5, 4.0}) EXPECT_NEAR(qplr::rotation_number(kFree, kAlpha, e, 0.0, 100000).value, 0.0, 1e-3);
  for (double e : {-2.0, -2.5, -4.0})
    EXPECT_NEAR(qplr::rotation_number(kFree, kAlpha, e, 0.0, 100000).value, 0.5, 1e-3);
  for (double e : {-1.5, -0.7, 0.4, 1.9})
    EXPECT_NEAR(qplr::rotation_number(kFree, kAlpha, e, 0.0, 100000).value, oracle::free_rotation(e), 1e-3);
}

TEST(Rotation, MonotoneInEnergy) {
  gen::for_all(3, 30, [](gen::Gen& g) {
    const auto p = g.potential(2, 0.8);
    double previous = 0.5;
    for (double e = -5.0; e <= 5.0; e += 0.05) {
      const double rho = qplr::rotation_number(p, kAlpha, e, 0.0, 20000).value;
      EXPECT_GE(rho, 0.0);
      EXPECT_LE(rho, 0.5);
      EXPECT_LE(rho, previous + 2e-3) << "E = " << e;
      previous = rho;
    }
  });
}

TEST(Rotation, MatchesIds) {
  const auto grid = qplr::linear_grid(-3.2, 3.2, 200);
  const auto table = qplr::ids(kHalf, kAlpha, 1024, {qplr::PhaseMode::equidistributed, 16, 0}, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = qplr::rotation_number(kHalf, kAlpha, grid[i], 0.0, 100000).value;
    worst = std::max(worst, std::abs(1.0 - 2.0 * rho - table.n_values[i]));
  }
  EXPECT_LT(worst, 1e-2);
}

TEST(MFunction, FreeClosedForm) {
  const Complex m = qplr::m_function(kFree, kAlpha, {0.0, 1.0}, 0.0, 1000);
  EXPECT_NEAR(m.real(), 0.0, 1e-12);
  EXPECT_NEAR(m.imag(), (std::sqrt(5.0) - 1.0) / 2.0, 1e-12);
  for (Complex z : {Complex(0.5, 0.1), Complex(-1.2, 0.01), Complex(3.0, 0.5)}) {
    const Complex got = qplr::m_function(kFree, kAlpha, z, 0.0, qplr::default_m_depth(z.imag()));
    EXPECT_LT(std::abs(got - oracle::free_m(z)), 1e-7) << z;
  }
}

TEST(MFunction, NearRealAxis) {
  const double eps = 1e-6;
  const Complex m = qplr::m_function(kFree, kAlpha, {0.0, eps}, 0.0, qplr::default_m_depth(eps));
  EXPECT_LT(std::abs(m - Complex(0.0, 1.0)), 1e-5);
}

TEST(MFunction, ReportsNonConvergence) {
  EXPECT_THROW(qplr::m_function(kFree, kAlpha, {0.5, 1e-6}, 0.0, 1000), qplr::ConvergenceError);
  EXPECT_THROW(qplr::m_function(kFree, kAlpha, {0.0, 0.0}, 0.0, 1000), qplr::InvalidArgument);
}

TEST(MFunction, Herglotz) {
  gen::for_all(40, 40, [](gen::Gen& g) {
    const auto p = g.potential(3, 1.5);
    const Complex z(g.uniform(-5, 5), std::pow(10.0, g.uniform(-3, 0)));
    const Complex m = qplr::m_function(p, kAlpha, z, g.uniform(0, 1), qplr::default_m_depth(z.imag()));
    EXPECT_GT(m.imag(), 0.0);
  });
}

TEST(Kotani, FreeDensity) {
  const qplr::KotaniOptions options{1e-4, 100, 0};
  EXPECT_NEAR(qplr::kotani_density(kFree, kAlpha, 0.0, options).value, oracle::free_density(0.0),
              0.02 * oracle::free_density(0.0));
  const double e = std::sqrt(2.0);
  EXPECT_NEAR(qplr::kotani_density(kFree, kAlpha, e, options).value, oracle::free_density(e),
              0.02 * oracle::free_density(e));
}

TEST(Kotani, ValidatesOptions) {
  EXPECT_THROW(qplr::kotani_density(kFree, kAlpha, 0.0, {1e-1, 100, 0}), qplr::InvalidArgument);
  EXPECT_THROW(qplr::kotani_density(kFree, kAlpha, 0.0, {1e-7, 100, 0}), qplr::InvalidArgument);
  EXPECT_THROW(qplr::kotani_density(kFree, kAlpha, 0.0, {1e-4, 99, 0}), qplr::InvalidArgument);
}

TEST(Kotani, PropagatesConvergenceFailure) {
  EXPECT_THROW(qplr::kotani_density(kFree, kAlpha, 0.5, {1e-6, 100, 1000}), qplr::ConvergenceError);
}

}  // namespace
