#include "empchaos/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "empchaos/errors.hpp"

namespace empchaos {

namespace {

Matrix weighted(const BasisSet& basis) {
  return basis.rule().weight_vector().asDiagonal() * basis.values();
}

double symmetric_condition(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double lo = eig.eigenvalues().minCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace

GalerkinMatrices::GalerkinMatrices(Matrix mass, Matrix advection, double condition_limit)
    : mass_(std::move(mass)), advection_(std::move(advection)) {
  if (mass_.rows() != mass_.cols() || advection_.rows() != mass_.rows() ||
      advection_.cols() != mass_.cols() || mass_.rows() == 0) {
    throw InvalidArgument("galerkin matrices must be square and of equal size");
  }
  condition_ = symmetric_condition(mass_);
  if (!(condition_ <= condition_limit)) {
    throw IllConditionedBasis("mass matrix condition number " + std::to_string(condition_) +
                                  " exceeds the limit",
                              condition_);
  }
  llt_.compute(mass_);
  cholesky_ok_ = llt_.info() == Eigen::Success;
  if (!cholesky_ok_) ldlt_.compute(mass_);
}

Matrix GalerkinMatrices::solve(const Matrix& rhs) const {
  return cholesky_ok_ ? Matrix(llt_.solve(rhs)) : Matrix(ldlt_.solve(rhs));
}

GalerkinMatrices assemble_matrices(const BasisSet& basis, double condition_limit) {
  const Matrix& psi = basis.values();
  const Matrix wpsi = weighted(basis);
  Matrix mass = psi.transpose() * wpsi;
  Matrix advection = psi.transpose() * (basis.rule().node_vector().asDiagonal() * wpsi);
  // The integrands are symmetric in (i, j); remove the product roundoff.
  mass = 0.5 * (mass + mass.transpose()).eval();
  advection = 0.5 * (advection + advection.transpose()).eval();
  return GalerkinMatrices(std::move(mass), std::move(advection), condition_limit);
}

Matrix cross_gram(const BasisSet& old_basis, const BasisSet& new_basis) {
  if (!old_basis.shares_rule_with(new_basis)) {
    throw InvalidArgument("change of basis requires a shared quadrature rule");
  }
  return weighted(new_basis).transpose() * old_basis.values();
}

Vector project_function(const Vector& values_at_nodes, const BasisSet& basis,
                        const GalerkinMatrices& matrices) {
  if (static_cast<std::size_t>(values_at_nodes.size()) != basis.node_count()) {
    throw InvalidArgument("project_function: value count does not match the rule");
  }
  const Vector f = weighted(basis).transpose() * values_at_nodes;
  return matrices.solve(f);
}

Vector project_function(const Vector& values_at_nodes, const BasisSet& basis) {
  return project_function(values_at_nodes, basis, assemble_matrices(basis));
}

CoefficientField project_initial_condition(const PdeProblem& problem, const BasisSet& basis,
                                           const GalerkinMatrices& matrices,
                                           const SpatialGrid& grid, double time) {
  // Deterministic data: f_j(x) = u0(x) E[Psi^j], so c(x) = u0(x) * M^{-1} E[Psi].
  const Vector means = weighted(basis).colwise().sum().transpose();
  const Vector unit = matrices.solve(means);
  const Vector u0 = problem.initial_condition(grid);
  CoefficientField field;
  field.coefficients = unit * u0.transpose();
  field.time = time;
  field.basis_id = basis.id();
  return field;
}

CoefficientField project_initial_condition(const PdeProblem& problem, const BasisSet& basis,
                                           const SpatialGrid& grid, double time) {
  return project_initial_condition(problem, basis, assemble_matrices(basis), grid, time);
}

CoefficientField change_basis(const CoefficientField& field, const BasisSet& old_basis,
                              const BasisSet& new_basis, const GalerkinMatrices& new_matrices) {
  if (field.basis_id != old_basis.id()) {
    throw InvalidArgument("change_basis: field is not expressed in the given old basis");
  }
  if (static_cast<std::size_t>(field.coefficients.rows()) != old_basis.size()) {
    throw InvalidArgument("change_basis: coefficient rows do not match the old basis");
  }
  const Matrix x = cross_gram(old_basis, new_basis);
  CoefficientField out;
  out.coefficients = new_matrices.solve(x * field.coefficients);
  out.time = field.time;
  out.basis_id = new_basis.id();
  return out;
}

CoefficientField change_basis(const CoefficientField& field, const BasisSet& old_basis,
                              const BasisSet& new_basis) {
  return change_basis(field, old_basis, new_basis, assemble_matrices(new_basis));
}

Matrix reconstruct_at_nodes(const CoefficientField& field, const BasisSet& basis) {
  if (static_cast<std::size_t>(field.coefficients.rows()) != basis.size()) {
    throw InvalidArgument("reconstruct_at_nodes: coefficient rows do not match the basis");
  }
  return basis.values() * field.coefficients;
}

GalerkinOperator::GalerkinOperator(const PdeProblem& problem, const BasisSet& basis,
                                   const GalerkinMatrices& matrices, const SpatialGrid& grid)
    : problem_(problem),
      matrices_(&matrices),
      grid_(&grid),
      basis_values_(basis.values()),
      weighted_basis_(weighted(basis)) {
  if (matrices.size() != basis.size()) {
    throw InvalidArgument("galerkin operator: matrices do not match the basis");
  }
}

Matrix GalerkinOperator::reaction_projection(const Matrix& coefficients) const {
  Matrix u = basis_values_ * coefficients;  // K x M
  const double c = problem_.reaction_coefficient;
  const double p = problem_.reaction_exponent;
  if (p == 0.5) {
    u = c * u.cwiseAbs().cwiseSqrt();
  } else {
    u = c * u.cwiseAbs().array().pow(p).matrix();
  }
  return weighted_basis_.transpose() * u;
}

Matrix GalerkinOperator::operator()(double, const Matrix& coefficients) const {
  Matrix rhs = matrices_->advection() * spatial_derivative_rows(coefficients, *grid_);
  if (problem_.has_reaction()) rhs += reaction_projection(coefficients);
  return matrices_->solve(rhs);
}

Matrix galerkin_rhs(const PdeProblem& problem, const CoefficientField& field,
                    const BasisSet& basis, const GalerkinMatrices& matrices,
                    const SpatialGrid& grid) {
  if (!field.coefficients.allFinite()) {
    throw IntegrationDiverged("galerkin_rhs: non-finite coefficients", field.time);
  }
  return GalerkinOperator(problem, basis, matrices, grid)(field.time, field.coefficients);
}

std::vector<CoefficientField> propagate_window(const PdeProblem& problem,
                                               const CoefficientField& field,
                                               const BasisSet& basis,
                                               const GalerkinMatrices& matrices,
                                               const TimeWindow& window,
                                               const SpatialGrid& grid, double step) {
  if (field.basis_id != basis.id()) {
    throw InvalidArgument("propagate_window: field is not expressed in the given basis");
  }
  if (std::abs(field.time - window.start()) > 1e-9 * std::max(1.0, std::abs(window.start()))) {
    throw InvalidArgument("propagate_window: field time does not match the window start");
  }
  const GalerkinOperator op(problem, basis, matrices, grid);
  auto states = integrate_ode(op, field.coefficients, window, step);
  std::vector<CoefficientField> out;
  out.reserve(states.size());
  for (std::size_t j = 0; j < states.size(); ++j) {
    out.push_back({std::move(states[j]), window.output_times()[j], basis.id()});
  }
  return out;
}

void ExpansionArchive::append(BasisSet basis, std::vector<CoefficientField> trajectory) {
  if (trajectory.empty()) throw InvalidArgument("archive: empty trajectory");
  for (const auto& f : trajectory) {
    if (f.basis_id != basis.id()) {
      throw InvalidArgument("archive: trajectory not expressed in its basis");
    }
  }
  if (!windows_.empty()) {
    const double prev_end = windows_.back().window().end();
    const double start = basis.window().start();
    if (std::abs(prev_end - start) > 1e-9 * std::max(1.0, std::abs(start))) {
      throw InvalidArgument("archive: windows must be contiguous");
    }
  }
  const Matrix wpsi = weighted(basis);
  Matrix mass = basis.values().transpose() * wpsi;
  mass = 0.5 * (mass + mass.transpose()).eval();
  Vector means = wpsi.colwise().sum().transpose();
  windows_.push_back({std::move(basis), std::move(mass), std::move(means), std::move(trajectory)});
}

double ExpansionArchive::start_time() const {
  if (windows_.empty()) throw OutOfRange("archive is empty");
  return windows_.front().window().start();
}

double ExpansionArchive::end_time() const {
  if (windows_.empty()) throw OutOfRange("archive is empty");
  return windows_.back().window().end();
}

const ArchiveWindow& ExpansionArchive::locate(double t) const {
  if (windows_.empty()) throw OutOfRange("archive is empty");
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  if (t < start_time() - tol || t > end_time() + tol) {
    throw OutOfRange("time " + std::to_string(t) + " is outside the archive");
  }
  for (const auto& w : windows_) {
    if (t <= w.window().end() + tol) return w;
  }
  return windows_.back();
}

namespace {

const CoefficientField& nearest_snapshot(const ArchiveWindow& w, double t) {
  const CoefficientField* best = &w.trajectory.front();
  for (const auto& f : w.trajectory) {
    if (std::abs(f.time - t) < std::abs(best->time - t)) best = &f;
  }
  return *best;
}

void check_x(const ArchiveWindow& w, std::size_t x_index) {
  if (x_index >= static_cast<std::size_t>(w.trajectory.front().coefficients.cols())) {
    throw OutOfRange("grid index outside the coefficient field");
  }
}

double window_mean_square(const ArchiveWindow& w, const CoefficientField& f, std::size_t x) {
  const auto c = f.coefficients.col(static_cast<Eigen::Index>(x));
  return c.dot(w.mass * c);
}

double window_mean(const ArchiveWindow& w, const CoefficientField& f, std::size_t x) {
  return f.coefficients.col(static_cast<Eigen::Index>(x)).dot(w.basis_means);
}

}  // namespace

double mean_square_expectation(const ExpansionArchive& archive, std::size_t x_index, double t) {
  const ArchiveWindow& w = archive.locate(t);
  check_x(w, x_index);
  return window_mean_square(w, nearest_snapshot(w, t), x_index);
}

double mean(const ExpansionArchive& archive, std::size_t x_index, double t) {
  const ArchiveWindow& w = archive.locate(t);
  check_x(w, x_index);
  return window_mean(w, nearest_snapshot(w, t), x_index);
}

std::vector<std::pair<double, double>> statistic_series(const ExpansionArchive& archive,
                                                        std::size_t x_index, Statistic stat) {
  std::vector<std::pair<double, double>> out;
  for (const auto& w : archive.windows()) {
    check_x(w, x_index);
    for (const auto& f : w.trajectory) {
      if (!out.empty() && std::abs(f.time - out.back().first) <= 1e-9 * std::max(1.0, f.time)) {
        continue;
      }
      const double v = stat == Statistic::Mean ? window_mean(w, f, x_index)
                                               : window_mean_square(w, f, x_index);
      out.emplace_back(f.time, v);
    }
  }
  return out;
}

}  // namespace empchaos
