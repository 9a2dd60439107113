#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "qplr/error.hpp"
#include "qplr/linalg.hpp"
#include "qplr/operators.hpp"
#include "qplr/potential.hpp"

namespace {

using qplr::Complex;

TEST(Potential, ZeroVanishes) { EXPECT_EQ(qplr::Potential::zero()(0.3), 0.0); }

TEST(Potential, AlmostMathieuValues) {
  EXPECT_NEAR(qplr::Potential::almost_mathieu(1.0)(0.0), 2.0, 1e-15);
  EXPECT_NEAR(qplr::Potential::almost_mathieu(0.5)(0.25), 0.0, 1e-15);
  EXPECT_EQ(qplr::Potential::almost_mathieu(0.7).coefficient({1}), Complex(0.7, 0.0));
  EXPECT_EQ(qplr::Potential::almost_mathieu(0.7).coefficient({3}), Complex(0.0, 0.0));
}

TEST(Potential, RejectsNonHermitianCoefficients) {
  EXPECT_THROW(qplr::Potential(1, {{{1}, Complex(1.0, 0.5)}, {{-1}, Complex(1.0, 0.5)}}), qplr::InvalidArgument);
  EXPECT_THROW(qplr::Potential(1, {{{0}, Complex(0.0, 1.0)}}), qplr::InvalidArgument);
  EXPECT_THROW(qplr::Potential(1, {{{1, 0}, Complex(1.0, 0.0)}}), qplr::InvalidArgument);
}

TEST(Potential, MatchesDirectFourierSum) {
  gen::for_all(20, 100, [](gen::Gen& g) {
    const auto p = g.potential(4, 1.0);
    const double x = g.uniform(-3.0, 3.0);
    Complex direct = 0.0;
    for (const auto& [k, c] : p.coefficients()) direct += c * std::exp(Complex(0.0, 2.0 * std::numbers::pi * k[0] * x));
    EXPECT_NEAR(p(x), direct.real(), 1e-12);
    EXPECT_NEAR(p(x), p(x + 1.0), 1e-12);
  });
}

TEST(Potential, TwoFrequencyEvaluation) {
  const qplr::Potential p(2, {{{1, 0}, Complex(0.5, 0.0)}, {{-1, 0}, Complex(0.5, 0.0)},
                              {{0, 1}, Complex(0.0, 0.25)}, {{0, -1}, Complex(0.0, -0.25)}});
  const std::vector<double> x{0.1, 0.3};
  const double expect = std::cos(2 * std::numbers::pi * 0.1) - 0.5 * std::sin(2 * std::numbers::pi * 0.3);
  EXPECT_NEAR(p(x), expect, 1e-14);
}

TEST(FrequencyVector, RejectsOutOfRange) {
  EXPECT_THROW(qplr::FrequencyVector({1.2}), qplr::InvalidArgument);
  EXPECT_THROW(qplr::FrequencyVector({0.0}), qplr::InvalidArgument);
  EXPECT_THROW(qplr::FrequencyVector(std::vector<double>{}), qplr::InvalidArgument);
  EXPECT_NEAR(qplr::FrequencyVector::golden()[0], oracle::kGolden, 1e-16);
}

TEST(Operators, FreeThreeSiteLaplacian) {
  const auto op = qplr::build_effective(qplr::Potential::zero(), qplr::FrequencyVector::golden(), 0.0, {0, 2});
  Eigen::MatrixXd expect(3, 3);
  expect << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  EXPECT_EQ(op.dense_real(), expect);
}

TEST(Operators, AmoDiagonalAtOrigin) {
  const auto op = qplr::build_effective(qplr::Potential::almost_mathieu(1.0), qplr::FrequencyVector::golden(), 0.0,
                                        qplr::Window{0, 9});
  EXPECT_NEAR(op.diagonal()[0], 2.0, 1e-15);
  EXPECT_NEAR(op.diagonal()[3], 2.0 * std::cos(2 * std::numbers::pi * 3 * oracle::kGolden), 1e-13);
}

TEST(Operators, FreeDirichletEigenvalues) {
  const int n = 200;
  const auto op = qplr::build_effective(qplr::Potential::zero(), qplr::FrequencyVector::golden(), 0.0, {0, n - 1});
  const auto ev = qplr::linalg::tridiagonal_eigenvalues(op.full_diagonal(), op.off_diagonal());
  for (int j = 1; j <= n; ++j) EXPECT_NEAR(ev(n - j), oracle::free_dirichlet_eigenvalue(j, n), 1e-10);
}

TEST(Operators, RejectsTinyWindow) {
  EXPECT_THROW(qplr::build_effective(qplr::Potential::zero(), qplr::FrequencyVector::golden(), 0.0, {0, 0}),
               qplr::InvalidArgument);
}

TEST(Operators, ShiftCovariance) {
  gen::for_all(10, 200, [](gen::Gen& g) {
    const auto p = g.potential(3, 1.0);
    const auto alpha = qplr::FrequencyVector::golden();
    const double x = g.uniform(0.0, 1.0);
    const long a = g.integer(-50, 50);
    const qplr::Window w{a, a + g.integer(2, 40)};
    const auto shifted = qplr::build_effective(p, alpha, x + alpha[0], w);
    const auto moved = qplr::build_effective(p, alpha, x, {w.first + 1, w.last + 1});
    EXPECT_LT((shifted.dense_real() - moved.dense_real()).cwiseAbs().maxCoeff(), 1e-12);
  });
}

TEST(Operators, HermitianEverywhere) {
  gen::for_all(10, 300, [](gen::Gen& g) {
    const auto p = g.potential(3, 1.5);
    const auto alpha = qplr::FrequencyVector::golden();
    const auto h = qplr::build_effective(p, alpha, g.uniform(0, 1), qplr::Window::centered(30)).dense();
    EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
    const auto d = qplr::build_dual(p, alpha, g.uniform(0, 1), qplr::Box(qplr::Window::centered(30))).dense();
    EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  });
}

TEST(Operators, FreeDualIsDiagonal) {
  const double theta = 0.17;
  const auto op = qplr::build_dual(qplr::Potential::zero(), qplr::FrequencyVector::golden(), theta,
                                   qplr::Box(qplr::Window{-5, 5}));
  const Eigen::MatrixXd m = op.dense_real();
  for (long i = 0; i < 11; ++i) {
    const long site = i - 5;
    EXPECT_NEAR(m(i, i), 2.0 * std::cos(2 * std::numbers::pi * (oracle::kGolden * site + theta)), 1e-13);
    for (long j = 0; j < 11; ++j)
      if (i != j) EXPECT_EQ(m(i, j), 0.0);
  }
}

TEST(Operators, AmoDualHopping) {
  const auto m = qplr::build_dual(qplr::Potential::almost_mathieu(0.3), qplr::FrequencyVector::golden(), 0.0,
                                  qplr::Box(qplr::Window{0, 5}))
                     .dense_real();
  EXPECT_NEAR(m(1, 0), 0.3, 1e-15);
  EXPECT_NEAR(m(0, 1), 0.3, 1e-15);
  EXPECT_EQ(m(2, 0), 0.0);
}

TEST(Velocity, TwoSiteMatrix) {
  const auto a = qplr::build_velocity({0, 1}).dense();
  EXPECT_EQ(a(0, 0), Complex(0.0, 0.0));
  EXPECT_EQ(a(0, 1), Complex(0.0, -1.0));
  EXPECT_EQ(a(1, 0), Complex(0.0, 1.0));
}

TEST(Velocity, SpectrumIsLaplacianSpectrum) {
  const int n = 64;
  const auto a = qplr::build_velocity({0, n - 1}).dense();
  const auto ev = qplr::linalg::hermitian_eigensystem(a, false).values;
  for (int j = 1; j <= n; ++j) EXPECT_NEAR(ev(n - j), oracle::free_dirichlet_eigenvalue(j, n), 1e-10);
}

TEST(Velocity, NormNearTwo) {
  const auto a = qplr::build_velocity(qplr::Window::centered(1024)).dense();
  const double norm = qplr::linalg::hermitian_norm(a);
  EXPECT_NEAR(norm, 2.0, 1e-4);
  EXPECT_LT(norm, 2.0);
}

TEST(Linalg, BlasSelfCheck) { EXPECT_LT(qplr::linalg::gemm_self_check(), 1e-9); }

}  // namespace
