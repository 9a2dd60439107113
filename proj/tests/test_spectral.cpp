#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "qplr/error.hpp"
#include "qplr/operators.hpp"
#include "qplr/phases.hpp"
#include "qplr/spectral.hpp"

namespace {

const auto kAlpha = qplr::FrequencyVector::golden();
const auto kFree = qplr::Potential::zero();
const auto kHalf = qplr::Potential::almost_mathieu(0.5);

qplr::PhaseSampling equi(std::size_t count) { return {qplr::PhaseMode::equidistributed, count, 0}; }

TEST(Eigensolve, FreeThreeSites) {
  const auto s = qplr::eigensolve(qplr::build_effective(kFree, kAlpha, 0.0, {0, 2}));
  EXPECT_NEAR(s.values()(0), -std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(s.values()(1), 0.0, 1e-14);
  EXPECT_NEAR(s.values()(2), std::sqrt(2.0), 1e-14);
  EXPECT_LT(s.orthonormality_residual(), 1e-13);
}

TEST(Eigensolve, DiagonalDualSortsEntries) {
  const auto op = qplr::build_dual(kFree, kAlpha, 0.3, qplr::Box(qplr::Window{-20, 20}));
  auto diag = op.full_diagonal();
  std::sort(diag.begin(), diag.end());
  const auto s = qplr::eigensolve(op);
  for (std::size_t i = 0; i < diag.size(); ++i) EXPECT_NEAR(s.values()(static_cast<Eigen::Index>(i)), diag[i], 1e-13);
}

TEST(Eigensolve, SingleSite) {
  const qplr::TruncatedOperator op(qplr::Box(qplr::Window{0, 0}), {1.75}, {});
  const auto s = qplr::eigensolve(op);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.values()(0), 1.75);
}

TEST(Eigensolve, ReconstructsRandomOperators) {
  gen::for_all(10, 50, [](gen::Gen& g) {
    const auto op = qplr::build_effective(g.potential(3, 1.0), kAlpha, g.uniform(0, 1),
                                          qplr::Window::centered(static_cast<std::size_t>(g.integer(2, 300))));
    const auto s = qplr::eigensolve(op);
    EXPECT_LT(s.orthonormality_residual(), 1e-12);
    EXPECT_LT(s.reconstruction_residual(op), 1e-12);
  });
}

TEST(Phases, EquidistributedMidpoints) {
  const auto x = qplr::sample_phases(equi(4), 1);
  ASSERT_EQ(x.size(), 4u);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(x[j][0], (j + 0.5) / 4.0);
}

TEST(Phases, RandomIsSeeded) {
  const qplr::PhaseSampling a{qplr::PhaseMode::random, 16, 7};
  qplr::PhaseSampling b = a;
  EXPECT_EQ(qplr::sample_phases(a, 2), qplr::sample_phases(b, 2));
  b.seed = 8;
  EXPECT_NE(qplr::sample_phases(a, 2), qplr::sample_phases(b, 2));
  for (const auto& x : qplr::sample_phases(a, 2))
    for (double v : x) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
}

TEST(Ids, FreeValues) {
  const double s2 = std::sqrt(2.0);
  const auto table = qplr::ids(kFree, kAlpha, 2048, equi(4), {0.0, s2});
  EXPECT_NEAR(table.n_values[0], 0.5, 2.0 / 2048);
  EXPECT_NEAR(table.n_values[1], 0.75, 0.005);
}

TEST(Ids, GershgorinBounds) {
  gen::for_all(5, 60, [](gen::Gen& g) {
    const auto p = g.potential(2, 1.0);
    const auto table = qplr::ids(p, kAlpha, 128, equi(4), {});
    const double lo = *std::min_element(table.levels.begin(), table.levels.end());
    const double hi = *std::max_element(table.levels.begin(), table.levels.end());
    const double bound = 2.0 + 2.0 * 3.0 * std::sqrt(2.0) + 1.0;
    EXPECT_EQ(table.count_below(-bound - 0.01), 0.0);
    EXPECT_EQ(table.count_below(bound + 0.01), 1.0);
    EXPECT_EQ(table.count_below(lo), 0.0);
    EXPECT_EQ(table.count_below(std::nextafter(hi, 1e9)), 1.0);
  });
}

TEST(Ids, NondecreasingInEnergy) {
  gen::for_all(5, 70, [](gen::Gen& g) {
    const auto grid = qplr::linear_grid(-6.0, 6.0, 301);
    const auto table = qplr::ids(g.potential(3, 1.0), kAlpha, 256, equi(4), grid);
    EXPECT_TRUE(std::is_sorted(table.n_values.begin(), table.n_values.end()));
  });
}

TEST(Ids, FreeClosedFormSupNorm) {
  const auto grid = qplr::linear_grid(-2.5, 2.5, 201);
  const auto table = qplr::ids(kFree, kAlpha, 2048, equi(32), grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(table.n_values[i] - oracle::free_ids(grid[i])));
  EXPECT_LT(worst, 5e-3);
}

TEST(InverseIds, FreeValues) {
  const auto table = qplr::ids(kFree, kAlpha, 2048, equi(4), {});
  const auto e = qplr::inverse_ids(table);
  EXPECT_NEAR(e(0.5), 0.0, 0.01);
  EXPECT_NEAR(e(0.75), std::sqrt(2.0), 0.01);
  EXPECT_EQ(e(0.0), e.bottom());
  EXPECT_EQ(e(1.0), e.top());
}

TEST(InverseIds, InvertsIdsInTheBulk) {
  const auto grid = qplr::linear_grid(-1.8, 1.8, 181);
  const double spacing = grid[1] - grid[0];
  const auto table = qplr::ids(kFree, kAlpha, 1024, equi(8), grid);
  const auto e = qplr::inverse_ids(table);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LT(std::abs(e(table.n_values[i]) - grid[i]), 2.0 * spacing);
}

TEST(GroupVelocity, FreeBound) {
  const auto table = qplr::ids(kFree, kAlpha, 2048, equi(32), {});
  const auto gv = qplr::group_velocity_bound(table);
  EXPECT_NEAR(gv.q_norm_bound, 2.0, 0.05);
  EXPECT_DOUBLE_EQ(gv.lr_velocity_bound, 2.0 * gv.q_norm_bound);
  EXPECT_NEAR(gv.argmax_n, 0.5, 0.05);
}

TEST(GroupVelocity, FlatBandIsDegenerate) {
  const auto table = qplr::IdsTable::from_levels(std::vector<double>(4096, 5.0), 1024, 4);
  EXPECT_THROW(qplr::group_velocity_bound(table), qplr::DegenerateSpectrumError);
}

TEST(GroupVelocity, ValidatesArguments) {
  const auto table = qplr::ids(kFree, kAlpha, 256, equi(4), {});
  EXPECT_THROW(qplr::group_velocity_bound(table, 1e-5), qplr::InvalidArgument);
  EXPECT_THROW(qplr::group_velocity_bound(table, 1e-3, 1.0), qplr::InvalidArgument);
}

TEST(GroupVelocity, StableUnderWindowDoubling) {
  const auto a = qplr::group_velocity_bound(qplr::ids(kHalf, kAlpha, 1024, equi(32), {}));
  const auto b = qplr::group_velocity_bound(qplr::ids(kHalf, kAlpha, 2048, equi(32), {}));
  EXPECT_LT(std::abs(a.q_norm_bound - b.q_norm_bound) / b.q_norm_bound, 0.03);
}

TEST(Gaps, FreeHasNone) {
  const auto table = qplr::ids(kFree, kAlpha, 1024, equi(8), qplr::linear_grid(-3, 3, 601));
  EXPECT_TRUE(qplr::detect_gaps(table, 0.02).gaps.empty());
  EXPECT_EQ(qplr::detect_gaps(table, 0.02).largest(), nullptr);
}

TEST(Gaps, ThresholdAboveDiameter) {
  const auto table = qplr::ids(kHalf, kAlpha, 512, equi(8), qplr::linear_grid(-3, 3, 601));
  EXPECT_TRUE(qplr::detect_gaps(table, 10.0).gaps.empty());
}

TEST(Gaps, LargestGapIsLabelled) {
  const auto table = qplr::ids(kHalf, kAlpha, 2048, equi(1), qplr::linear_grid(-3, 3, 601));
  const auto report = qplr::detect_gaps(table, 0.02);
  ASSERT_NE(report.largest(), nullptr);
  double best = 1.0;
  for (int k = -5; k <= 5; ++k) {
    if (k == 0) continue;
    const double label = qplr::wrap_unit(k * kAlpha[0]);
    best = std::min(best, std::abs(report.largest()->n_value - label));
  }
  EXPECT_LT(best, 1e-2);
}

TEST(Histogram, MatchesFreeDensity) {
  // Every phase gives the same free spectrum, so the bin must hold many levels.
  const auto table = qplr::ids(kFree, kAlpha, 2048, equi(1), {});
  for (double e : {0.0, 0.8, -1.2})
    EXPECT_NEAR(qplr::histogram_density(table, e, 0.2), oracle::free_density(e), 0.03 * oracle::free_density(e));
  EXPECT_THROW(qplr::histogram_density(table, 0.0, 0.0), qplr::InvalidArgument);
}

}  // namespace
