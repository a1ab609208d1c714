#include "empchaos/pde_core.hpp"

#include <algorithm>
#include <numbers>

namespace empchaos {

SpatialGrid::SpatialGrid(std::size_t point_count)
    : point_count_(point_count),
      spacing_(2.0 * std::numbers::pi / static_cast<double>(point_count)) {
  if (point_count < 3) {
    throw InvalidArgument("spatial grid needs at least three points");
  }
}

Vector SpatialGrid::points() const {
  Vector x(static_cast<Eigen::Index>(point_count_));
  for (std::size_t i = 0; i < point_count_; ++i) x(static_cast<Eigen::Index>(i)) = this->x(i);
  return x;
}

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Wave:
      return "wave";
    case ProblemKind::AdvectionReaction:
      return "advection-reaction";
  }
  return "unknown";
}

ProblemKind problem_kind_from_string(std::string_view name) {
  if (name == "wave") return ProblemKind::Wave;
  if (name == "advection-reaction") return ProblemKind::AdvectionReaction;
  throw InvalidArgument("unknown problem '" + std::string(name) + "'");
}

Vector PdeProblem::initial_condition(const SpatialGrid& grid) const {
  Vector u(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    u(static_cast<Eigen::Index>(i)) = initial_condition(grid.x(i));
  }
  return u;
}

TimeWindow::TimeWindow(double start, double end, std::vector<double> output_times)
    : start_(start), end_(end), output_times_(std::move(output_times)) {
  if (!(start < end)) {
    throw InvalidArgument("time window requires start < end");
  }
  for (std::size_t j = 0; j < output_times_.size(); ++j) {
    const double t = output_times_[j];
    if (t < start_ || t > end_) {
      throw InvalidArgument("output time outside its window");
    }
    if (j > 0 && !(t > output_times_[j - 1])) {
      throw InvalidArgument("output times must be strictly increasing");
    }
  }
}

TimeWindow TimeWindow::uniform(double start, double end, double output_interval) {
  if (!(output_interval > 0.0)) {
    throw InvalidArgument("output interval must be positive");
  }
  const double ratio = (end - start) / output_interval;
  const auto n = static_cast<long>(std::llround(ratio));
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument("window length must be a positive multiple of the output interval");
  }
  std::vector<double> times(static_cast<std::size_t>(n) + 1);
  for (long j = 0; j <= n; ++j) {
    times[static_cast<std::size_t>(j)] = start + (end - start) * static_cast<double>(j) /
                                                     static_cast<double>(n);
  }
  times.back() = end;
  return TimeWindow(start, end, std::move(times));
}

TimeWindow TimeWindow::shifted_to(double new_start) const {
  const double shift = new_start - start_;
  std::vector<double> times(output_times_);
  for (double& t : times) t += shift;
  return TimeWindow(new_start, end_ + shift, std::move(times));
}

Vector spatial_derivative(std::span<const double> values, const SpatialGrid& grid) {
  if (values.size() != grid.size()) {
    throw InvalidArgument("spatial_derivative: length does not match grid");
  }
  const std::size_t m = values.size();
  const double inv = 1.0 / (2.0 * grid.spacing());
  Vector d(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t ip = (i + 1 == m) ? 0 : i + 1;
    const std::size_t im = (i == 0) ? m - 1 : i - 1;
    d(static_cast<Eigen::Index>(i)) = (values[ip] - values[im]) * inv;
  }
  return d;
}

Vector spatial_derivative(const Vector& values, const SpatialGrid& grid) {
  return spatial_derivative(std::span<const double>(values.data(), values.size()), grid);
}

Matrix spatial_derivative_rows(const Matrix& rows, const SpatialGrid& grid) {
  const auto m = static_cast<Eigen::Index>(grid.size());
  if (rows.cols() != m) {
    throw InvalidArgument("spatial_derivative_rows: column count does not match grid");
  }
  const double inv = 1.0 / (2.0 * grid.spacing());
  Matrix d(rows.rows(), m);
  d.middleCols(1, m - 2) = (rows.rightCols(m - 2) - rows.leftCols(m - 2)) * inv;
  d.col(0) = (rows.col(1) - rows.col(m - 1)) * inv;
  d.col(m - 1) = (rows.col(0) - rows.col(m - 2)) * inv;
  return d;
}

double default_step(const SpatialGrid& grid) {
  return std::min(1e-2, 0.5 * grid.spacing());
}

std::vector<Vector> solve_fixed_xi(const PdeProblem& problem, double xi,
                                   const Vector& initial, const TimeWindow& window,
                                   const SpatialGrid& grid, double step) {
  if (initial.size() != static_cast<Eigen::Index>(grid.size())) {
    throw InvalidArgument("solve_fixed_xi: initial state does not match grid");
  }
  if (std::abs(xi) * step > 0.5 * grid.spacing() * (1.0 + 1e-12)) {
    throw InvalidArgument("solve_fixed_xi: step violates |xi| * step / h <= 1/2");
  }
  const bool sqrt_reaction = problem.has_reaction() && problem.reaction_exponent == 0.5;
  auto rhs = [&](double, const Vector& u) -> Vector {
    Vector du = xi * spatial_derivative(u, grid);
    if (sqrt_reaction) {
      du.array() += problem.reaction_coefficient * u.array().abs().sqrt();
    } else if (problem.has_reaction()) {
      for (Eigen::Index i = 0; i < du.size(); ++i) du(i) += problem.reaction(u(i));
    }
    return du;
  };
  return integrate_ode(rhs, initial, window, step);
}

}  // namespace empchaos
