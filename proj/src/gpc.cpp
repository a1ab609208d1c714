#include "empchaos/gpc.hpp"

#include <cmath>

#include "empchaos/errors.hpp"

namespace empchaos {

Matrix legendre_advection_matrix(std::size_t order) {
  if (order < 1) throw InvalidArgument("legendre_advection_matrix: order must be >= 1");
  const auto n = static_cast<Eigen::Index>(order);
  Matrix a = Matrix::Zero(n, n);
  // xi L^k = b_{k+1} L^{k+1} + b_k L^{k-1}, b_k = k / sqrt((2k-1)(2k+1)).
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double kk = static_cast<double>(k + 1);
    const double b = kk / std::sqrt((2.0 * kk - 1.0) * (2.0 * kk + 1.0));
    a(k, k + 1) = b;
    a(k + 1, k) = b;
  }
  return a;
}

GpcSystem::GpcSystem(const PdeProblem& problem, std::size_t order, const SpatialGrid& grid,
                     std::shared_ptr<const QuadratureRule> reaction_rule)
    : problem_(problem),
      order_(order),
      grid_(&grid),
      advection_(legendre_advection_matrix(order)),
      rule_(std::move(reaction_rule)) {
  if (order > kGpcMaxOrder) {
    throw InvalidArgument("gPC order above " + std::to_string(kGpcMaxOrder) + " is not supported");
  }
  if (!rule_) {
    rule_ = std::make_shared<const QuadratureRule>(
        chebyshev_trapezoid_rule(kGpcReactionNodes, RandomInterval::symmetric_unit()));
  }
  legendre_ = legendre_table(order, *rule_);
  weighted_legendre_ = rule_->weight_vector().asDiagonal() * legendre_;
}

Matrix GpcSystem::initial_coefficients() const {
  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(order_),
                          static_cast<Eigen::Index>(grid_->size()));
  c.row(0) = problem_.initial_condition(*grid_).transpose();
  return c;
}

Matrix GpcSystem::operator()(double, const Matrix& coefficients) const {
  Matrix rhs = advection_ * spatial_derivative_rows(coefficients, *grid_);
  if (problem_.has_reaction()) {
    Matrix u = legendre_ * coefficients;
    const double c = problem_.reaction_coefficient;
    const double p = problem_.reaction_exponent;
    u = (p == 0.5) ? Matrix(c * u.cwiseAbs().cwiseSqrt())
                   : Matrix(c * u.cwiseAbs().array().pow(p).matrix());
    rhs.noalias() += weighted_legendre_.transpose() * u;
  }
  return rhs;
}

std::vector<CoefficientField> solve_gpc(const PdeProblem& problem, std::size_t order,
                                       const SpatialGrid& grid, const TimeWindow& window,
                                       double step) {
  const GpcSystem system(problem, order, grid);
  auto states = integrate_ode(system, system.initial_coefficients(), window, step);
  std::vector<CoefficientField> out;
  out.reserve(states.size());
  for (std::size_t j = 0; j < states.size(); ++j) {
    out.push_back({std::move(states[j]), window.output_times()[j], 0});
  }
  return out;
}

double gpc_mean_square(const CoefficientField& field, std::size_t x_index) {
  return field.coefficients.col(static_cast<Eigen::Index>(x_index)).squaredNorm();
}

double gpc_mean(const CoefficientField& field, std::size_t x_index) {
  return field.coefficients(0, static_cast<Eigen::Index>(x_index));
}

double project_exact_wave(std::size_t order, double t) {
  if (order < 1) throw InvalidArgument("project_exact_wave: order must be >= 1");
  // Enough Gauss points to resolve both the polynomials and cos(xi t).
  const std::size_t nodes = order + static_cast<std::size_t>(std::ceil(std::abs(t))) + 40;
  const auto rule = gauss_legendre_rule(nodes, RandomInterval::symmetric_unit());
  const Matrix table = legendre_table(order, rule);
  Vector f(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t l = 0; l < rule.size(); ++l) {
    f(static_cast<Eigen::Index>(l)) = std::cos(rule.nodes()[l] * t);
  }
  const Vector c = table.transpose() * (rule.weight_vector().asDiagonal() * f);
  return c.squaredNorm();
}

double exact_wave_mean_square(double x, double t) {
  // E[cos^2(x + xi t)] = (1 + cos(2x) sin(2t) / (2t)) / 2.
  const double s = (t == 0.0) ? 1.0 : std::sin(2.0 * t) / (2.0 * t);
  return 0.5 * (1.0 + std::cos(2.0 * x) * s);
}

double exact_wave_mean(double x, double t) {
  const double s = (t == 0.0) ? 1.0 : std::sin(t) / t;
  return std::cos(x) * s;
}

}  // namespace empchaos
