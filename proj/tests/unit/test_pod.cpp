#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "empchaos/errors.hpp"
#include "empchaos/pde_core.hpp"
#include "empchaos/pod.hpp"

using namespace empchaos;

namespace {

std::shared_ptr<const QuadratureRule> rule_of(std::size_t k) {
  return std::make_shared<const QuadratureRule>(
      chebyshev_trapezoid_rule(k, RandomInterval::symmetric_unit()));
}

TrajectoryMatrix wrap(Matrix m) {
  TrajectoryMatrix t;
  t.grid_points = static_cast<std::size_t>(m.rows());
  t.time_count = 1;
  t.entries = std::move(m);
  return t;
}

// Random matrix with a prescribed, rapidly decaying spectrum.
Matrix spectrum_matrix(Eigen::Index rows, Eigen::Index cols, const Vector& sigma, unsigned seed) {
  std::srand(seed);
  Eigen::HouseholderQR<Matrix> qu(Matrix::Random(rows, rows));
  Eigen::HouseholderQR<Matrix> qv(Matrix::Random(cols, cols));
  const Matrix u = qu.householderQ() * Matrix::Identity(rows, sigma.size());
  const Matrix v = qv.householderQ() * Matrix::Identity(cols, sigma.size());
  return u * sigma.asDiagonal() * v.transpose();
}

const TimeWindow kWindow = TimeWindow::uniform(0.0, 1.0, 0.1);

}  // namespace

TEST(AssembleTrajectoryMatrix, SingleSolutionIsFlattenedTrajectory) {
  std::vector<std::vector<Vector>> sol(1);
  sol[0] = {Vector::LinSpaced(4, 0, 3), Vector::LinSpaced(4, 10, 13)};
  const auto t = assemble_trajectory_matrix(sol);
  ASSERT_EQ(t.entries.rows(), 8);
  ASSERT_EQ(t.entries.cols(), 1);
  EXPECT_EQ(t.grid_points, 4u);
  EXPECT_EQ(t.time_count, 2u);
  // row index = i * N_t + j
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(t.entries(i * 2 + 0, 0), i);
    EXPECT_EQ(t.entries(i * 2 + 1, 0), 10 + i);
  }
}

TEST(AssembleTrajectoryMatrix, IdenticalSolutionsGiveRankOne) {
  std::vector<Vector> traj = {Vector::Random(6), Vector::Random(6), Vector::Random(6)};
  const auto t = assemble_trajectory_matrix({traj, traj});
  EXPECT_EQ((t.entries.col(0) - t.entries.col(1)).norm(), 0.0);
  Eigen::JacobiSVD<Matrix> svd(t.entries);
  EXPECT_LT(svd.singularValues()(1), 1e-14 * svd.singularValues()(0));
}

TEST(AssembleTrajectoryMatrix, WaveInitialSliceIndependentOfXi) {
  const SpatialGrid g(32);
  const auto p = PdeProblem::wave();
  const TimeWindow w(0.0, 1.0, {0.0});
  std::vector<std::vector<Vector>> sols;
  for (double xi : {-1.0, 0.0, 1.0}) sols.push_back(solve_fixed_xi(p, xi, p.initial_condition(g), w, g, 0.01));
  const auto t = assemble_trajectory_matrix(sols);
  for (int l = 0; l < 3; ++l) {
    for (std::size_t i = 0; i < 32; ++i) EXPECT_DOUBLE_EQ(t.entries(static_cast<Eigen::Index>(i), l), std::cos(g.x(i)));
  }
}

TEST(AssembleTrajectoryMatrix, RaggedInputThrows) {
  EXPECT_THROW(assemble_trajectory_matrix({{Vector::Zero(3)}, {Vector::Zero(4)}}), InvalidArgument);
  EXPECT_THROW(assemble_trajectory_matrix({{Vector::Zero(3)}, {Vector::Zero(3), Vector::Zero(3)}}),
               InvalidArgument);
  EXPECT_THROW(assemble_trajectory_matrix({}), InvalidArgument);
}

TEST(RetainedCount, ThresholdAndCap) {
  const std::vector<double> s = {10, 5, 1e-2, 1e-3, 9e-4, 1e-8};
  EXPECT_EQ(retained_count(s, {1e-4, std::nullopt}), 4u);
  EXPECT_EQ(retained_count(s, {1e-4, 2}), 2u);
  EXPECT_EQ(retained_count(s, {0.9, std::nullopt}), 1u);
  EXPECT_EQ(retained_count(s, {1e-12, std::nullopt}), 6u);
}

TEST(TruncatePod, RankOneKeepsOneFunction) {
  const Vector col = Vector::Random(50);
  Matrix m(50, 7);
  for (int l = 0; l < 7; ++l) m.col(l) = (l + 1.0) * col;
  const auto basis = truncate_pod(wrap(m), {}, rule_of(7), kWindow);
  EXPECT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis.singular_values().size(), 7u);
}

TEST(TruncatePod, OrthogonalBlocksKeepEverything) {
  const Eigen::Index k = 6;
  Eigen::HouseholderQR<Matrix> qr(Matrix::Random(k, k));
  const Matrix q = qr.householderQ();
  Matrix stacked(3 * k, k);
  stacked << q, Matrix::Zero(k, k), q;  // columns all have norm sqrt(2), mutually orthogonal
  const auto basis = truncate_pod(wrap(stacked), {}, rule_of(static_cast<std::size_t>(k)), kWindow);
  EXPECT_EQ(basis.size(), static_cast<std::size_t>(k));
  for (double s : basis.singular_values()) EXPECT_NEAR(s / basis.singular_values()[0], 1.0, 1e-12);
}

TEST(TruncatePod, ZeroMatrixIsDegenerate) {
  EXPECT_THROW(truncate_pod(wrap(Matrix::Zero(10, 4)), {}, rule_of(4), kWindow), DegenerateInput);
}

TEST(TruncatePod, RejectsThresholdOutsideUnitInterval) {
  EXPECT_THROW(truncate_pod(wrap(Matrix::Random(10, 4)), {0.0, std::nullopt}, rule_of(4), kWindow),
               InvalidArgument);
  EXPECT_THROW(truncate_pod(wrap(Matrix::Random(10, 4)), {1.0, std::nullopt}, rule_of(4), kWindow),
               InvalidArgument);
}

TEST(TruncatePod, ColumnsOrthonormalAndSpectrumSorted) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    std::srand(seed);
    const Matrix m = Matrix::Random(300, 40);
    const auto basis = truncate_pod(wrap(m), {1e-1, std::nullopt}, rule_of(40), kWindow);
    const Matrix v = basis.values();
    const auto n = v.cols();
    EXPECT_LT((v.transpose() * v - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
    const auto& s = basis.singular_values();
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GE(s[i - 1], s[i]);
  }
}

// Eckart-Young: the squared residual equals the discarded energy.
TEST(ProjectionResidual, MatchesDiscardedSingularValues) {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    Vector sigma(12);
    for (int i = 0; i < 12; ++i) sigma(i) = std::pow(0.3, i);
    const Matrix m = spectrum_matrix(200, 30, sigma, seed);
    const auto basis = truncate_pod(wrap(m), {1e-4, std::nullopt}, rule_of(30), kWindow);
    const auto& s = basis.singular_values();
    double discarded = 0.0;
    for (std::size_t i = basis.size(); i < s.size(); ++i) discarded += s[i] * s[i];
    const double r = projection_residual(wrap(m), basis);
    EXPECT_NEAR(r, std::sqrt(discarded), 1e-8 * std::sqrt(discarded));
    EXPECT_LE(r / s[0], 1e-4 * std::sqrt(30.0));
  }
}

TEST(ProjectionResidual, RankTwoTruncatedToOne) {
  Vector sigma(2);
  sigma << 3.0, 0.5;
  const Matrix m = spectrum_matrix(40, 9, sigma, 3);
  const auto basis = truncate_pod(wrap(m), {0.5, std::nullopt}, rule_of(9), kWindow);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_NEAR(projection_residual(wrap(m), basis), 0.5, 1e-12);
}

TEST(ProjectionResidual, UntruncatedBasisIsExact) {
  std::srand(11);
  const Matrix m = Matrix::Random(60, 8);
  const auto basis = truncate_pod(wrap(m), {1e-14, std::nullopt}, rule_of(8), kWindow);
  ASSERT_EQ(basis.size(), 8u);
  EXPECT_LT(projection_residual(wrap(m), basis), 1e-10 * m.norm());
  const Matrix v = basis.values();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    EXPECT_LT((m.col(c) - m * v * v.row(c).transpose()).norm(), 1e-10 * m.norm());
  }
}

TEST(ProjectionResidual, DimensionMismatchThrows) {
  const auto basis = truncate_pod(wrap(Matrix::Random(10, 4)), {}, rule_of(4), kWindow);
  EXPECT_THROW(projection_residual(wrap(Matrix::Random(10, 5)), basis), InvalidArgument);
}

// First wave window with the default configuration. The semi-discrete
// problem u_t = xi D u with u0 = cos has the closed form
// cos(x + xi t sin(h)/h), which serves as an independent oracle for the
// spectrum of T.
TEST(TruncatePod, FirstWaveWindowAgreesWithSemiDiscreteSolution) {
  const SpatialGrid g(256);
  const auto p = PdeProblem::wave();
  const auto rule = rule_of(120);
  const auto w = TimeWindow::uniform(0.0, 1.0, 0.1);
  std::vector<std::vector<Vector>> sols;
  for (double xi : rule->nodes()) sols.push_back(solve_fixed_xi(p, xi, p.initial_condition(g), w, g, default_step(g)));
  const auto t = assemble_trajectory_matrix(sols);
  const auto basis = truncate_pod(t, {}, rule, w);
  EXPECT_GE(basis.size(), 1u);
  EXPECT_LE(basis.size(), 9u);

  const double c = std::sin(g.spacing()) / g.spacing();
  Matrix exact(t.entries.rows(), 120);
  for (std::size_t i = 0; i < 256; ++i) {
    for (std::size_t j = 0; j < w.output_times().size(); ++j) {
      for (std::size_t l = 0; l < 120; ++l) {
        exact(static_cast<Eigen::Index>(i * 11 + j), static_cast<Eigen::Index>(l)) =
            std::cos(g.x(i) + rule->nodes()[l] * w.output_times()[j] * c);
      }
    }
  }
  Eigen::BDCSVD<Matrix> svd(exact);
  const auto oracle = truncate_pod(wrap(exact), {}, rule, w);
  EXPECT_EQ(basis.size(), oracle.size());
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(basis.singular_values()[i] / svd.singularValues()(0),
                svd.singularValues()(static_cast<Eigen::Index>(i)) / svd.singularValues()(0), 1e-8);
  }
}

TEST(BasisSet, IdentityAndRuleSharing) {
  const auto rule = rule_of(5);
  BasisSet a(Matrix::Identity(5, 2), rule, kWindow);
  BasisSet b(Matrix::Identity(5, 2), rule, kWindow);
  EXPECT_NE(a.id(), b.id());
  EXPECT_TRUE(a.shares_rule_with(b));
  const auto c = a.with_window(kWindow.shifted_to(1.0));
  EXPECT_NE(c.id(), a.id());
  EXPECT_EQ(c.values(), a.values());
  BasisSet other(Matrix::Identity(5, 2), rule_of(5), kWindow);
  EXPECT_TRUE(a.shares_rule_with(other));  // equal rules compare by value
  EXPECT_THROW(BasisSet(Matrix::Identity(4, 2), rule, kWindow), InvalidArgument);
  EXPECT_THROW(BasisSet(Matrix(5, 0), rule, kWindow), InvalidArgument);
}

TEST(SingularValuesCsv, FixedHeader) {
  std::ostringstream os;
  write_singular_values_csv(os, {4.0, 2.0, 1.0});
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "index,sigma,sigma_scaled");
  EXPECT_NE(s.find("2,2,0.5"), std::string::npos);
}
