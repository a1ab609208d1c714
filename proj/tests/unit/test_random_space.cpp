#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "empchaos/errors.hpp"
#include "empchaos/random_space.hpp"

using namespace empchaos;

namespace {
const RandomInterval kUnit = RandomInterval::symmetric_unit();

double weight_sum(const QuadratureRule& rule) { return rule.weight_vector().sum(); }
}  // namespace

TEST(RandomInterval, RejectsEmptySupport) {
  EXPECT_THROW(RandomInterval(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(RandomInterval(2.0, -1.0), InvalidArgument);
  const RandomInterval r(0.0, 4.0);
  EXPECT_DOUBLE_EQ(r.density() * r.length(), 1.0);
  EXPECT_DOUBLE_EQ(r.midpoint(), 2.0);
}

TEST(ChebyshevNodes, ThreeNodesAreEndpointsAndCenter) {
  const auto n = chebyshev_nodes(3, kUnit);
  ASSERT_EQ(n.size(), 3u);
  EXPECT_DOUBLE_EQ(n[0], -1.0);
  EXPECT_NEAR(n[1], 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(n[2], 1.0);
}

TEST(ChebyshevNodes, TwoNodesAreEndpoints) {
  const auto n = chebyshev_nodes(2, kUnit);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_DOUBLE_EQ(n[0], -1.0);
  EXPECT_DOUBLE_EQ(n[1], 1.0);
}

TEST(ChebyshevNodes, FiveNodesOnShiftedInterval) {
  const RandomInterval iv(0.0, 2.0);
  const auto n = chebyshev_nodes(5, iv);
  ASSERT_EQ(n.size(), 5u);
  const double s = std::sqrt(2.0) / 2.0;
  const double expected[] = {0.0, 1.0 - s, 1.0, 1.0 + s, 2.0};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(n[i], expected[i], 1e-15);
}

TEST(ChebyshevNodes, SymmetricAboutMidpointAndIncreasing) {
  for (std::size_t count : {2u, 7u, 120u, 300u, 301u}) {
    const RandomInterval iv(-3.0, 5.0);
    const auto n = chebyshev_nodes(count, iv);
    for (std::size_t i = 0; i < count; ++i) {
      EXPECT_NEAR(n[i] - iv.midpoint(), iv.midpoint() - n[count - 1 - i], 1e-14) << count;
      if (i > 0) EXPECT_LT(n[i - 1], n[i]);
    }
  }
}

TEST(ChebyshevNodes, RejectsFewerThanTwo) {
  EXPECT_THROW(chebyshev_nodes(1, kUnit), InvalidArgument);
  EXPECT_THROW(chebyshev_nodes(0, kUnit), InvalidArgument);
}

TEST(TrapezoidRule, ThreeUniformNodes) {
  const std::vector<double> nodes = {-1.0, 0.0, 1.0};
  const auto rule = trapezoid_rule(nodes, kUnit);
  EXPECT_DOUBLE_EQ(rule.weights()[0], 0.25);
  EXPECT_DOUBLE_EQ(rule.weights()[1], 0.5);
  EXPECT_DOUBLE_EQ(rule.weights()[2], 0.25);
}

TEST(TrapezoidRule, RejectsBadNodes) {
  EXPECT_THROW(trapezoid_rule(std::vector<double>{-1.0, 0.0, 0.0, 1.0}, kUnit), InvalidArgument);
  EXPECT_THROW(trapezoid_rule(std::vector<double>{-1.0, 0.5, 0.0, 1.0}, kUnit), InvalidArgument);
  EXPECT_THROW(trapezoid_rule(std::vector<double>{-0.5, 0.0, 1.0}, kUnit), InvalidArgument);
}

TEST(TrapezoidRule, PartitionOfUnity) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> count(2, 400);
    std::uniform_real_distribution<double> lo(-10.0, 0.0), len(0.1, 20.0);
    const double a = lo(gen);
    const RandomInterval iv(a, a + len(gen));
    const auto rule = chebyshev_trapezoid_rule(static_cast<std::size_t>(count(gen)), iv);
    EXPECT_NEAR(weight_sum(rule), 1.0, 1e-12);
    for (double w : rule.weights()) EXPECT_GE(w, 0.0);
  }
}

TEST(TrapezoidRule, SecondMomentWith120Nodes) {
  const auto rule = chebyshev_trapezoid_rule(120, kUnit);
  Vector v = rule.node_vector().array().square();
  EXPECT_NEAR(expectation(v, rule), 1.0 / 3.0, 1e-4);
}

// The trapezoid rule on Chebyshev-Lobatto nodes is second order in the node
// spacing, so the second-moment error should shrink roughly 4x per doubling.
TEST(TrapezoidRule, SecondOrderConvergence) {
  double prev = 0.0;
  for (std::size_t k : {50u, 100u, 200u, 400u}) {
    const auto rule = chebyshev_trapezoid_rule(k, kUnit);
    const double err = std::abs(expectation(Vector(rule.node_vector().array().square()), rule) - 1.0 / 3.0);
    if (prev > 0.0) {
      EXPECT_GT(prev / err, 3.5);
      EXPECT_LT(prev / err, 4.5);
    }
    prev = err;
  }
}

TEST(Expectation, ConstantAndOddFunctions) {
  const auto rule = chebyshev_trapezoid_rule(121, kUnit);
  EXPECT_NEAR(expectation(Vector::Ones(121), rule), 1.0, 1e-14);
  EXPECT_NEAR(expectation(Vector(rule.node_vector()), rule), 0.0, 1e-14);
}

TEST(Expectation, CosineSquaredAtQuarterPeriod) {
  const auto rule = chebyshev_trapezoid_rule(300, kUnit);
  const double t = std::numbers::pi / 2.0;
  Vector v = (rule.node_vector().array() * t).cos().square();
  EXPECT_NEAR(expectation(v, rule), 0.5, 1e-4);
}

TEST(Expectation, LengthMismatchThrows) {
  const auto rule = chebyshev_trapezoid_rule(10, kUnit);
  EXPECT_THROW(expectation(Vector::Ones(9), rule), InvalidArgument);
}

TEST(QuadratureRule, ValidatesInvariants) {
  EXPECT_THROW(QuadratureRule(kUnit, {0.0, 0.5}, {0.5, 0.6}), InvalidArgument);   // sum
  EXPECT_THROW(QuadratureRule(kUnit, {0.0, 0.5}, {1.5, -0.5}), InvalidArgument);  // sign
  EXPECT_THROW(QuadratureRule(kUnit, {0.5, 0.0}, {0.5, 0.5}), InvalidArgument);   // order
  EXPECT_THROW(QuadratureRule(kUnit, {0.0, 2.0}, {0.5, 0.5}), InvalidArgument);   // support
  EXPECT_NO_THROW(QuadratureRule(kUnit, {0.0, 0.5}, {0.5, 0.5}));
}

TEST(GaussLegendre, ExactForPolynomials) {
  const auto rule = gauss_legendre_rule(10, kUnit);
  EXPECT_NEAR(weight_sum(rule), 1.0, 1e-14);
  for (int p = 0; p <= 19; ++p) {
    Vector v = rule.node_vector().array().pow(p);
    const double exact = (p % 2 == 0) ? 1.0 / (p + 1) : 0.0;
    EXPECT_NEAR(expectation(v, rule), exact, 1e-14) << p;
  }
}

TEST(Legendre, LowOrderValues) {
  EXPECT_DOUBLE_EQ(legendre_normalized(0, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(legendre_normalized(0, -1.0), 1.0);
  EXPECT_NEAR(legendre_normalized(1, 0.5), std::sqrt(3.0) * 0.5, 1e-15);
  // sqrt(5) (3x^2 - 1) / 2
  EXPECT_NEAR(legendre_normalized(2, 0.4), std::sqrt(5.0) * (3 * 0.16 - 1) / 2, 1e-14);
  // Endpoint value sqrt(2n + 1).
  EXPECT_NEAR(legendre_normalized(15, 1.0), std::sqrt(31.0), 1e-12);
}

TEST(Legendre, OrthonormalUnderGaussRule) {
  const auto rule = gauss_legendre_rule(40, kUnit);
  const Matrix table = legendre_table(21, rule);
  const Matrix gram = table.transpose() * rule.weight_vector().asDiagonal() * table;
  EXPECT_LT((gram - Matrix::Identity(21, 21)).cwiseAbs().maxCoeff(), 1e-12);
}

// Under the 300-node Chebyshev trapezoid rule the same Gram matrix carries
// the rule's O(h^2) error; measured values are checked against bounds with a
// small margin.
TEST(Legendre, TrapezoidGramAccuracy) {
  const auto rule = chebyshev_trapezoid_rule(300, kUnit);
  const Matrix table = legendre_table(21, rule);
  const Matrix gram = table.transpose() * rule.weight_vector().asDiagonal() * table;
  EXPECT_NEAR(gram(2, 2), 1.0, 1e-4);
  EXPECT_LT((gram - Matrix::Identity(21, 21)).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LT((gram - gram.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}
