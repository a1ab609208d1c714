#include "empchaos/empirical_chaos.hpp"

#include "empchaos/basis_evolution.hpp"
#include "empchaos/errors.hpp"

namespace empchaos {

std::string_view to_string(WindowAction action) {
  switch (action) {
    case WindowAction::Resample:
      return "resample";
    case WindowAction::Evolve:
      return "evolve";
    case WindowAction::Hold:
      return "hold";
  }
  return "unknown";
}

ResampleSchedule always_resample() {
  return [](std::size_t) { return WindowAction::Resample; };
}

ResampleSchedule alternating(WindowAction other) {
  return [other](std::size_t i) { return (i % 2 == 1) ? WindowAction::Resample : other; };
}

ResampleSchedule first_then(WindowAction other) {
  return [other](std::size_t i) { return i == 1 ? WindowAction::Resample : other; };
}

ResampleSchedule schedule_from_string(std::string_view name) {
  if (name == "resample") return always_resample();
  if (name == "alternate") return alternating(WindowAction::Evolve);
  if (name == "alternate-hold") return alternating(WindowAction::Hold);
  if (name == "evolve-after-first") return first_then(WindowAction::Evolve);
  if (name == "hold-after-first") return first_then(WindowAction::Hold);
  throw InvalidArgument("unknown schedule '" + std::string(name) + "'");
}

ExpansionResult run_empirical_chaos(const PdeProblem& problem, const SpatialGrid& grid,
                                    ExpansionOptions options) {
  options.schedule = always_resample();
  return run_algorithm_1(problem, grid, options);
}

}  // namespace empchaos
