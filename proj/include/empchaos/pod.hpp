#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "empchaos/pde_core.hpp"
#include "empchaos/random_space.hpp"
#include "empchaos/types.hpp"

namespace empchaos {

/// Snapshot matrix with one row per (grid point, output time) pair and one
/// column per quadrature node. Row index = i * time_count + j.
struct TrajectoryMatrix {
  Matrix entries;
  std::size_t grid_points = 0;
  std::size_t time_count = 0;

  std::size_t node_count() const noexcept { return static_cast<std::size_t>(entries.cols()); }
};

/// Stochastic basis functions tabulated at the nodes of a quadrature rule.
/// Column i of `values` is Psi^i at every node.
class BasisSet {
 public:
  BasisSet(Matrix values, std::shared_ptr<const QuadratureRule> rule, TimeWindow window,
           std::vector<double> singular_values = {});

  const Matrix& values() const noexcept { return values_; }
  const QuadratureRule& rule() const noexcept { return *rule_; }
  const std::shared_ptr<const QuadratureRule>& rule_ptr() const noexcept { return rule_; }
  const TimeWindow& window() const noexcept { return window_; }
  const std::vector<double>& singular_values() const noexcept { return singular_values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  std::size_t node_count() const noexcept { return static_cast<std::size_t>(values_.rows()); }

  // Unique per constructed basis; coefficient fields refer to it.
  std::uint64_t id() const noexcept { return id_; }

  bool shares_rule_with(const BasisSet& other) const;

  BasisSet with_values(Matrix values, TimeWindow window) const;
  BasisSet with_window(TimeWindow window) const;

 private:
  Matrix values_;
  std::shared_ptr<const QuadratureRule> rule_;
  TimeWindow window_;
  std::vector<double> singular_values_;
  std::uint64_t id_;
};

struct PodOptions {
  double threshold = 1e-4;
  std::optional<std::size_t> cap;
};

/// Builds T from K fixed-xi solutions; solutions[l][j] is the state of
/// node l at output time j.
TrajectoryMatrix assemble_trajectory_matrix(const std::vector<std::vector<Vector>>& solutions);

/// Number of singular values with sigma_i / sigma_1 >= threshold, at least
/// one, then clipped by the optional cap.
std::size_t retained_count(const std::vector<double>& singular_values,
                           const PodOptions& options);

/// Thin SVD of T; keeps the leading right singular vectors.
BasisSet truncate_pod(const TrajectoryMatrix& trajectories, const PodOptions& options,
                      std::shared_ptr<const QuadratureRule> rule, TimeWindow window);

/// ||T - T P||_F with P the Euclidean projector onto the basis columns.
double projection_residual(const TrajectoryMatrix& trajectories, const BasisSet& basis);

/// CSV with header "index,sigma,sigma_scaled" (1-based index).
void write_singular_values_csv(std::ostream& out, const std::vector<double>& singular_values);

}  // namespace empchaos
