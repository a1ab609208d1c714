#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "empchaos/pde_core.hpp"
#include "empchaos/random_space.hpp"
#include "empchaos/types.hpp"

namespace empchaos {

struct McConfig {
  std::size_t sample_count = 10000;
  std::uint64_t seed = 0;
  PdeProblem problem = PdeProblem::wave();
  std::size_t grid_points = 256;
  RandomInterval interval = RandomInterval::symmetric_unit();
  double t_final = 10.0;
  double output_interval = 0.1;
  double step = 0.0;  // 0 selects default_step
  std::size_t workers = 0;
  // Degenerate distribution: every sample uses this value. Diagnostics only.
  std::optional<double> fixed_xi;
};

/// Per-output-time, per-grid-point sample statistics (rows = times).
struct McStatistics {
  std::vector<double> times;
  Matrix mean;
  Matrix mean_square;
  Matrix mean_stderr;
  Matrix mean_square_stderr;
  std::size_t used_samples = 0;
  std::size_t diverged_samples = 0;
};

/// Counter-based uniform draw in [0, 1): a pure function of (seed, index).
double counter_uniform(std::uint64_t seed, std::uint64_t index);

/// Samples are split into fixed blocks of kMcBlockSize, solved in parallel
/// and folded in block order, so the result does not depend on thread count.
inline constexpr std::size_t kMcBlockSize = 64;

McStatistics mc_statistics(const McConfig& config);

}  // namespace empchaos
