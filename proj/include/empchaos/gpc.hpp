#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "empchaos/galerkin.hpp"
#include "empchaos/pde_core.hpp"
#include "empchaos/random_space.hpp"

namespace empchaos {

inline constexpr std::size_t kGpcMaxOrder = 60;
inline constexpr std::size_t kGpcStableOrder = 40;
inline constexpr std::size_t kGpcReactionNodes = 300;

/// A_ji = E[xi L^j L^i] for normalized Legendre L^0..L^{order-1}. Uses the
/// closed-form three-term identity; the matrix is symmetric tridiagonal
/// with zero diagonal.
Matrix legendre_advection_matrix(std::size_t order);

/// Truncated Legendre Galerkin system u_t = A u_x (+ f_hat). The reaction
/// projection uses a quadrature rule (300-node Chebyshev trapezoid by
/// default).
class GpcSystem {
 public:
  GpcSystem(const PdeProblem& problem, std::size_t order, const SpatialGrid& grid,
            std::shared_ptr<const QuadratureRule> reaction_rule = nullptr);

  std::size_t order() const noexcept { return order_; }
  const Matrix& advection() const noexcept { return advection_; }
  const QuadratureRule& reaction_rule() const noexcept { return *rule_; }
  bool beyond_stable_order() const noexcept { return order_ > kGpcStableOrder; }

  // Deterministic initial data lands entirely in the constant mode.
  Matrix initial_coefficients() const;

  Matrix operator()(double t, const Matrix& coefficients) const;

 private:
  PdeProblem problem_;
  std::size_t order_;
  const SpatialGrid* grid_;
  Matrix advection_;
  std::shared_ptr<const QuadratureRule> rule_;
  Matrix legendre_;           // K x order
  Matrix weighted_legendre_;  // K x order
};

/// Coefficient trajectory at the output times of `window`, starting from
/// the projected deterministic initial condition at window.start().
std::vector<CoefficientField> solve_gpc(const PdeProblem& problem, std::size_t order,
                                       const SpatialGrid& grid, const TimeWindow& window,
                                       double step);

/// Orthonormality gives E[u^2] = |u_hat|^2 and E[u] = u_hat^0.
double gpc_mean_square(const CoefficientField& field, std::size_t x_index);
double gpc_mean(const CoefficientField& field, std::size_t x_index);

/// Mean square at x = 0 of the Legendre projection of cos(x + xi t) onto
/// L^0..L^{order-1}.
double project_exact_wave(std::size_t order, double t);

/// Closed-form wave statistics for u = cos(x + xi t), xi ~ U[-1, 1].
double exact_wave_mean_square(double x, double t);
double exact_wave_mean(double x, double t);

}  // namespace empchaos
