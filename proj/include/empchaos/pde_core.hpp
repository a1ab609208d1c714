#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "empchaos/errors.hpp"
#include "empchaos/types.hpp"

namespace empchaos {

/// Uniform periodic grid x_i = 2*pi*i/M on [0, 2*pi).
class SpatialGrid {
 public:
  explicit SpatialGrid(std::size_t point_count);

  std::size_t size() const noexcept { return point_count_; }
  double spacing() const noexcept { return spacing_; }
  double x(std::size_t i) const noexcept { return spacing_ * static_cast<double>(i); }
  Vector points() const;

  friend bool operator==(const SpatialGrid& a, const SpatialGrid& b) {
    return a.point_count_ == b.point_count_;
  }

 private:
  std::size_t point_count_;
  double spacing_;
};

enum class ProblemKind { Wave, AdvectionReaction };

std::string_view to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(std::string_view name);

/// u_t = xi * u_x            (Wave, u0 = cos x)
/// u_t = xi * u_x + c*|u|^p  (AdvectionReaction, u0 = cos x + 3/2)
struct PdeProblem {
  ProblemKind kind = ProblemKind::Wave;
  double reaction_coefficient = 0.0;
  double reaction_exponent = 0.5;

  static PdeProblem wave() { return {ProblemKind::Wave, 0.0, 0.5}; }
  static PdeProblem advection_reaction() {
    return {ProblemKind::AdvectionReaction, 0.1, 0.5};
  }

  bool has_reaction() const noexcept { return kind == ProblemKind::AdvectionReaction; }

  double initial_condition(double x) const noexcept {
    return kind == ProblemKind::Wave ? std::cos(x) : std::cos(x) + 1.5;
  }
  Vector initial_condition(const SpatialGrid& grid) const;

  // Pointwise reaction term; zero at u = 0.
  double reaction(double u) const noexcept {
    if (!has_reaction() || u == 0.0) return 0.0;
    if (reaction_exponent == 0.5) return reaction_coefficient * std::sqrt(std::abs(u));
    return reaction_coefficient * std::pow(std::abs(u), reaction_exponent);
  }
};

/// Interval [start, end] of validity for one basis, with the times at which
/// states are recorded.
class TimeWindow {
 public:
  TimeWindow(double start, double end, std::vector<double> output_times);

  // Output times start, start + dt, ..., end. (end - start) must be a
  // multiple of dt up to 1e-9 relative.
  static TimeWindow uniform(double start, double end, double output_interval);

  double start() const noexcept { return start_; }
  double end() const noexcept { return end_; }
  double length() const noexcept { return end_ - start_; }
  const std::vector<double>& output_times() const noexcept { return output_times_; }

  // Same output pattern shifted so that it begins at `new_start`.
  TimeWindow shifted_to(double new_start) const;

 private:
  double start_;
  double end_;
  std::vector<double> output_times_;
};

/// Central second-order difference with periodic wraparound.
Vector spatial_derivative(std::span<const double> values, const SpatialGrid& grid);
Vector spatial_derivative(const Vector& values, const SpatialGrid& grid);

/// Applies the periodic central difference along each row of `rows`
/// (rows index basis functions, columns index grid points).
Matrix spatial_derivative_rows(const Matrix& rows, const SpatialGrid& grid);

/// min(1e-2, h/2): keeps |xi| * step / h <= 1/2 for |xi| <= 1.
double default_step(const SpatialGrid& grid);

namespace detail {
template <class State>
bool all_finite(const State& s) {
  if constexpr (std::is_arithmetic_v<State>) {
    return std::isfinite(s);
  } else {
    return s.allFinite();
  }
}
}  // namespace detail

/// Classical fixed-step RK4. Between consecutive output times the interval
/// is split into equal sub-steps no longer than `step`, so every output time
/// is a step boundary. Returns one state per output time.
template <class State, class Rhs>
std::vector<State> integrate_ode(Rhs&& rhs, State initial, const TimeWindow& window,
                                 double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidArgument("integrate_ode: step must be positive");
  }
  if (!detail::all_finite(initial)) {
    throw IntegrationDiverged("integrate_ode: non-finite initial state", window.start());
  }
  std::vector<State> out;
  out.reserve(window.output_times().size());
  double t = window.start();
  State u = std::move(initial);
  for (double target : window.output_times()) {
    const double span = target - t;
    if (span > 0.0) {
      const auto n = static_cast<long>(std::ceil(span / step - 1e-9));
      const double dt = span / static_cast<double>(n);
      for (long k = 0; k < n; ++k) {
        const double tk = t + dt * static_cast<double>(k);
        State k1 = rhs(tk, u);
        State k2 = rhs(tk + 0.5 * dt, State(u + (0.5 * dt) * k1));
        State k3 = rhs(tk + 0.5 * dt, State(u + (0.5 * dt) * k2));
        State k4 = rhs(tk + dt, State(u + dt * k3));
        u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!detail::all_finite(u)) {
          throw IntegrationDiverged("integrate_ode: state became non-finite", tk + dt);
        }
      }
      t = target;
    }
    out.push_back(u);
  }
  return out;
}

/// Method-of-lines solution of the deterministic PDE for one value of xi.
std::vector<Vector> solve_fixed_xi(const PdeProblem& problem, double xi,
                                   const Vector& initial, const TimeWindow& window,
                                   const SpatialGrid& grid, double step);

}  // namespace empchaos
