#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "empchaos/galerkin.hpp"
#include "empchaos/pde_core.hpp"
#include "empchaos/pod.hpp"
#include "empchaos/random_space.hpp"

namespace empchaos {

/// What a window does to obtain its stochastic basis.
enum class WindowAction {
  Resample,  // sample K trajectories and take a fresh POD basis
  Evolve,    // propagate the previous basis with the matrix exponential
  Hold,      // reuse the previous basis unchanged
};

std::string_view to_string(WindowAction action);

/// Maps a 1-based window index to its action. Window 1 must resample.
using ResampleSchedule = std::function<WindowAction(std::size_t window_index)>;

ResampleSchedule always_resample();
// Odd windows resample; even windows use `other` (Evolve or Hold).
ResampleSchedule alternating(WindowAction other);
// Window 1 resamples; every later window uses `other`.
ResampleSchedule first_then(WindowAction other);
ResampleSchedule schedule_from_string(std::string_view name);

struct ExpansionOptions {
  RandomInterval interval = RandomInterval::symmetric_unit();
  std::size_t node_count = 120;
  double t_start = 0.0;
  double t_final = 1.0;
  double window_length = 1.0;
  double output_interval = 0.1;
  double step = 0.0;  // 0 selects default_step(grid)
  PodOptions pod;
  double mass_condition_limit = kDefaultConditionLimit;
  double block_condition_limit = kDefaultConditionLimit;
  double evolve_substep = 0.1;
  ResampleSchedule schedule = always_resample();
  std::size_t workers = 0;       // 0 = hardware concurrency
  bool record_residuals = false;  // store ||T - TP||_F per resampled window
};

/// Wall-clock seconds per pipeline stage.
struct StageTimings {
  double sampling = 0.0;
  double svd = 0.0;
  double change_of_basis = 0.0;
  double assembly = 0.0;
  double propagation = 0.0;
  double evolution = 0.0;

  double total() const noexcept {
    return sampling + svd + change_of_basis + assembly + propagation + evolution;
  }
};

struct WindowRecord {
  std::size_t index = 0;  // 1-based
  double start = 0.0;
  double end = 0.0;
  WindowAction action = WindowAction::Resample;
  std::size_t basis_size = 0;
  double mass_condition = 0.0;
  std::vector<double> singular_values;  // resampled windows only
  double projection_residual = -1.0;    // when requested
  double discarded_energy = -1.0;       // sum of squared discarded sigma
};

struct ExpansionResult {
  ExpansionArchive archive;
  std::vector<WindowRecord> windows;
  StageTimings timings;
};

/// Plain empirical chaos expansion: every window resamples.
ExpansionResult run_empirical_chaos(const PdeProblem& problem, const SpatialGrid& grid,
                                    ExpansionOptions options);

}  // namespace empchaos
