#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "empchaos/pde_core.hpp"
#include "empchaos/pod.hpp"
#include "empchaos/types.hpp"

namespace empchaos {

inline constexpr double kDefaultConditionLimit = 1e12;

/// Mass M_ji = E[Psi^i Psi^j] and advection A_ji = E[xi Psi^i Psi^j] for one
/// basis, with the mass factorized once for repeated solves.
class GalerkinMatrices {
 public:
  GalerkinMatrices(Matrix mass, Matrix advection, double condition_limit = kDefaultConditionLimit);

  const Matrix& mass() const noexcept { return mass_; }
  const Matrix& advection() const noexcept { return advection_; }
  double condition() const noexcept { return condition_; }
  bool positive_definite() const noexcept { return cholesky_ok_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(mass_.rows()); }

  // Solves mass * X = rhs.
  Matrix solve(const Matrix& rhs) const;

 private:
  Matrix mass_;
  Matrix advection_;
  Eigen::LLT<Matrix> llt_;
  Eigen::LDLT<Matrix> ldlt_;
  bool cholesky_ok_ = false;
  double condition_ = 0.0;
};

GalerkinMatrices assemble_matrices(const BasisSet& basis,
                                   double condition_limit = kDefaultConditionLimit);

/// Cross Gram X_ji = E[Psi_old^i Psi_new^j] (new.size() x old.size()).
Matrix cross_gram(const BasisSet& old_basis, const BasisSet& new_basis);

/// Deterministic coefficients u^i(x) for one time, N_b x M.
struct CoefficientField {
  Matrix coefficients;
  double time = 0.0;
  std::uint64_t basis_id = 0;
};

/// Solves mass * c = f with f_j = E[u Psi^j].
Vector project_function(const Vector& values_at_nodes, const BasisSet& basis,
                        const GalerkinMatrices& matrices);
Vector project_function(const Vector& values_at_nodes, const BasisSet& basis);

CoefficientField project_initial_condition(const PdeProblem& problem, const BasisSet& basis,
                                           const GalerkinMatrices& matrices,
                                           const SpatialGrid& grid, double time = 0.0);
CoefficientField project_initial_condition(const PdeProblem& problem, const BasisSet& basis,
                                           const SpatialGrid& grid, double time = 0.0);

CoefficientField change_basis(const CoefficientField& field, const BasisSet& old_basis,
                              const BasisSet& new_basis, const GalerkinMatrices& new_matrices);
CoefficientField change_basis(const CoefficientField& field, const BasisSet& old_basis,
                              const BasisSet& new_basis);

/// u(x_i, xi_l) = sum_k u^k(x_i) Psi^k(xi_l), returned as K x M.
Matrix reconstruct_at_nodes(const CoefficientField& field, const BasisSet& basis);

/// Right-hand side of the mass-solved Galerkin system
///   M u_t = A u_x (+ f_hat for the reaction term).
class GalerkinOperator {
 public:
  GalerkinOperator(const PdeProblem& problem, const BasisSet& basis,
                   const GalerkinMatrices& matrices, const SpatialGrid& grid);

  Matrix operator()(double t, const Matrix& coefficients) const;

  // Projected reaction f_hat_j = E[c |u|^p Psi^j] (before the mass solve).
  Matrix reaction_projection(const Matrix& coefficients) const;

 private:
  PdeProblem problem_;
  const GalerkinMatrices* matrices_;
  const SpatialGrid* grid_;
  Matrix basis_values_;  // K x N_b
  Matrix weighted_basis_;  // K x N_b, rows scaled by the quadrature weight
};

Matrix galerkin_rhs(const PdeProblem& problem, const CoefficientField& field,
                    const BasisSet& basis, const GalerkinMatrices& matrices,
                    const SpatialGrid& grid);

/// RK4 on the Galerkin system; one field per output time of `window`.
std::vector<CoefficientField> propagate_window(const PdeProblem& problem,
                                               const CoefficientField& field,
                                               const BasisSet& basis,
                                               const GalerkinMatrices& matrices,
                                               const TimeWindow& window,
                                               const SpatialGrid& grid, double step);

struct ArchiveWindow {
  BasisSet basis;
  Matrix mass;
  Vector basis_means;  // E[Psi^i]
  std::vector<CoefficientField> trajectory;

  const TimeWindow& window() const noexcept { return basis.window(); }
};

/// All windows solved so far, contiguous in time.
class ExpansionArchive {
 public:
  void append(BasisSet basis, std::vector<CoefficientField> trajectory);

  const std::vector<ArchiveWindow>& windows() const noexcept { return windows_; }
  bool empty() const noexcept { return windows_.empty(); }
  double start_time() const;
  double end_time() const;

  // Window whose interval contains t (earlier window wins at a shared end).
  const ArchiveWindow& locate(double t) const;

 private:
  std::vector<ArchiveWindow> windows_;
};

/// E[u(x_i, t)^2] = u_hat^T M u_hat at the stored output time nearest t.
double mean_square_expectation(const ExpansionArchive& archive, std::size_t x_index, double t);

/// E[u(x_i, t)] = sum_k u_hat^k E[Psi^k].
double mean(const ExpansionArchive& archive, std::size_t x_index, double t);

enum class Statistic { Mean, MeanSquare };

/// Statistic at every stored output time; a window's first snapshot is
/// skipped when it duplicates the previous window's last time.
std::vector<std::pair<double, double>> statistic_series(const ExpansionArchive& archive,
                                                        std::size_t x_index, Statistic stat);

}  // namespace empchaos
