#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "empchaos/errors.hpp"
#include "empchaos/gpc.hpp"

using namespace empchaos;

TEST(LegendreAdvection, KnownEntries) {
  const Matrix a = legendre_advection_matrix(3);
  EXPECT_NEAR(a(0, 1), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(a(1, 2), 2.0 / std::sqrt(15.0), 1e-15);
  EXPECT_EQ(a(0, 0), 0.0);
  EXPECT_EQ(a(0, 2), 0.0);
  EXPECT_THROW(legendre_advection_matrix(0), InvalidArgument);
}

TEST(LegendreAdvection, SymmetricTridiagonalZeroDiagonal) {
  const Matrix a = legendre_advection_matrix(30);
  EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < 30; ++i) {
    for (Eigen::Index j = 0; j < 30; ++j) {
      if (std::abs(i - j) != 1) EXPECT_EQ(a(i, j), 0.0);
    }
  }
  // Matches E[xi L_i L_j] computed with an exact Gauss rule.
  const auto rule = gauss_legendre_rule(40, RandomInterval::symmetric_unit());
  const Matrix t = legendre_table(30, rule);
  const Matrix ref = t.transpose() * (rule.weight_vector().array() * rule.node_vector().array()).matrix().asDiagonal() * t;
  EXPECT_LT((a - ref).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(GpcSystem, OrderLimits) {
  const SpatialGrid g(16);
  EXPECT_THROW(GpcSystem(PdeProblem::wave(), 0, g), InvalidArgument);
  EXPECT_THROW(GpcSystem(PdeProblem::wave(), kGpcMaxOrder + 1, g), InvalidArgument);
  EXPECT_FALSE(GpcSystem(PdeProblem::wave(), 40, g).beyond_stable_order());
  EXPECT_TRUE(GpcSystem(PdeProblem::wave(), 41, g).beyond_stable_order());
}

TEST(GpcSystem, InitialCoefficients) {
  const SpatialGrid g(32);
  const Matrix c = GpcSystem(PdeProblem::advection_reaction(), 4, g).initial_coefficients();
  const Vector u0 = PdeProblem::advection_reaction().initial_condition(g);
  EXPECT_LT((c.row(0).transpose() - u0).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(c.bottomRows(3).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SolveGpc, SingleModeWaveIsFrozen) {
  const SpatialGrid g(64);
  const auto w = TimeWindow::uniform(0.0, 5.0, 1.0);
  const auto out = solve_gpc(PdeProblem::wave(), 1, g, w, default_step(g));
  for (const auto& f : out) {
    EXPECT_LT((f.coefficients - out.front().coefficients).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_NEAR(gpc_mean_square(out.back(), 0), 1.0, 1e-15);
}

TEST(SolveGpc, WaveEnergyConserved) {
  const SpatialGrid g(128);
  const auto w = TimeWindow::uniform(0.0, 5.0, 1.0);
  const auto out = solve_gpc(PdeProblem::wave(), 12, g, w, 1e-3);
  const double e0 = out.front().coefficients.squaredNorm();
  for (const auto& f : out) EXPECT_LT(std::abs(f.coefficients.squaredNorm() - e0) / e0, 1e-6);
}

TEST(SolveGpc, ShortTimeMatchesExact) {
  const SpatialGrid g(256);
  const auto w = TimeWindow::uniform(0.0, 2.0, 0.5);
  const auto out = solve_gpc(PdeProblem::wave(), 12, g, w, default_step(g));
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double t = w.output_times()[j];
    EXPECT_NEAR(gpc_mean_square(out[j], 0), exact_wave_mean_square(0.0, t), 1e-3) << t;
    EXPECT_NEAR(gpc_mean(out[j], 0), exact_wave_mean(0.0, t), 1e-3) << t;
  }
}

TEST(SolveGpc, AdvectionReactionInitialMeanSquare) {
  const SpatialGrid g(32);
  const auto w = TimeWindow::uniform(0.0, 0.5, 0.5);
  const auto out = solve_gpc(PdeProblem::advection_reaction(), 5, g, w, default_step(g));
  EXPECT_NEAR(gpc_mean_square(out.front(), 0), 6.25, 1e-14);
  EXPECT_GT(gpc_mean_square(out.back(), 0), 6.25);
}

TEST(Statistics, MeanSquareIsCoefficientNorm) {
  CoefficientField f{Matrix::Zero(3, 4), 0.0, 0};
  f.coefficients.col(2) << 2.0, 3.0, -1.0;
  EXPECT_DOUBLE_EQ(gpc_mean_square(f, 2), 14.0);
  EXPECT_DOUBLE_EQ(gpc_mean(f, 2), 2.0);
}

TEST(ProjectExactWave, InitialTimeAndConvergence) {
  EXPECT_NEAR(project_exact_wave(1, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(project_exact_wave(5, 0.0), 1.0, 1e-14);
  for (double t : {1.0, 10.0, 25.0}) {
    EXPECT_NEAR(project_exact_wave(60, t), exact_wave_mean_square(0.0, t), 1e-6) << t;
    // Projection can only lose energy.
    EXPECT_LE(project_exact_wave(5, t), exact_wave_mean_square(0.0, t) + 1e-14);
  }
  EXPECT_THROW(project_exact_wave(0, 1.0), InvalidArgument);
}

TEST(ExactWave, ClosedForms) {
  EXPECT_DOUBLE_EQ(exact_wave_mean_square(0.3, 0.0), std::cos(0.3) * std::cos(0.3));
  EXPECT_NEAR(exact_wave_mean_square(0.0, 1.0), 0.5 * (1.0 + std::cos(1.0) * std::sin(1.0)), 1e-15);
  EXPECT_NEAR(exact_wave_mean_square(0.0, std::numbers::pi), 0.5, 1e-15);
  EXPECT_NEAR(exact_wave_mean(0.0, std::numbers::pi), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(exact_wave_mean(1.0, 0.0), std::cos(1.0));
}
