#include "empchaos/basis_evolution.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>

#include <Eigen/Eigenvalues>

#include "empchaos/errors.hpp"
#include "empchaos/matrix_exp.hpp"
#include "empchaos/parallel.hpp"

namespace empchaos {

SpatialGalerkinPair spatial_pair(const CoefficientField& field, const SpatialGrid& grid) {
  const Matrix& c = field.coefficients;
  if (!c.allFinite()) {
    throw InvalidArgument("spatial_pair: coefficient field is not finite");
  }
  const double h = grid.spacing();
  const Matrix dc = spatial_derivative_rows(c, grid);
  SpatialGalerkinPair pair;
  pair.gram = h * (c * c.transpose());
  pair.gram = 0.5 * (pair.gram + pair.gram.transpose()).eval();
  // advect(j, i) = h * sum_x c(j, x) dc(i, x)
  pair.advect = h * (c * dc.transpose());
  return pair;
}

namespace {

double block_condition(const Matrix& gram, std::size_t first, std::size_t size) {
  const auto f = static_cast<Eigen::Index>(first);
  const auto n = static_cast<Eigen::Index>(size);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram.block(f, f, n, n), Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace

std::vector<SpatialBlock> block_decompose(const Matrix& gram, double condition_limit) {
  if (!(condition_limit > 1.0)) {
    throw InvalidArgument("block_decompose: condition limit must exceed 1");
  }
  if (gram.rows() != gram.cols() || gram.rows() == 0) {
    throw InvalidArgument("block_decompose: gram matrix must be square and nonempty");
  }
  const auto n = static_cast<std::size_t>(gram.rows());
  const double max_diag = gram.diagonal().cwiseAbs().maxCoeff();
  std::vector<SpatialBlock> blocks;
  std::size_t first = 0;
  while (first < n) {
    const double d = gram(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(first));
    if (!(d > 0.0) || d <= max_diag / condition_limit) {
      throw SingularBlock("block_decompose: singular 1x1 block at index " + std::to_string(first),
                          first);
    }
    SpatialBlock block{first, 1, 1.0};
    while (first + block.size < n) {
      const double cond = block_condition(gram, first, block.size + 1);
      if (!(cond < condition_limit)) break;
      ++block.size;
      block.condition = cond;
    }
    blocks.push_back(block);
    first += block.size;
  }
  return blocks;
}

void block_decompose(SpatialGalerkinPair& pair, double condition_limit) {
  pair.blocks = block_decompose(pair.gram, condition_limit);
}

BasisSet evolve_basis(const BasisSet& basis, const SpatialGalerkinPair& pair, double dt,
                      TimeWindow new_window) {
  if (!(dt >= 0.0)) throw InvalidArgument("evolve_basis: dt must be nonnegative");
  const auto nb = static_cast<Eigen::Index>(basis.size());
  if (pair.gram.rows() != nb || pair.advect.rows() != nb) {
    throw InvalidArgument("evolve_basis: spatial pair does not match the basis size");
  }
  if (pair.blocks.empty()) {
    throw InvalidArgument("evolve_basis: spatial pair has no block structure");
  }
  Matrix values = basis.values();
  if (dt == 0.0) return basis.with_values(std::move(values), std::move(new_window));

  const auto nodes = basis.rule().nodes();
  for (const auto& block : pair.blocks) {
    const auto f = static_cast<Eigen::Index>(block.first);
    const auto n = static_cast<Eigen::Index>(block.size);
    Eigen::LLT<Matrix> llt(pair.gram.block(f, f, n, n));
    if (llt.info() != Eigen::Success) {
      throw SingularBlock("evolve_basis: block gram matrix is not positive definite",
                          block.first);
    }
    const Matrix generator = llt.solve(pair.advect.block(f, f, n, n));
    for (std::size_t l = 0; l < nodes.size(); ++l) {
      const auto row = static_cast<Eigen::Index>(l);
      const Matrix propagator = matrix_exponential((nodes[l] * dt) * generator);
      const Vector psi = values.block(row, f, 1, n).transpose();
      values.block(row, f, 1, n) = (propagator * psi).transpose();
    }
  }
  if (!values.allFinite()) {
    throw IntegrationDiverged("evolve_basis: evolved basis is not finite", new_window.start());
  }
  return basis.with_values(std::move(values), std::move(new_window));
}

BasisSet evolve_basis(const BasisSet& basis, const SpatialGalerkinPair& pair, double dt) {
  const TimeWindow& w = basis.window();
  return evolve_basis(basis, pair, dt, w.shifted_to(w.start() + dt));
}

namespace {

class StageClock {
 public:
  explicit StageClock(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  StageClock(const StageClock&) = delete;
  StageClock& operator=(const StageClock&) = delete;

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

TimeWindow output_window(double start, double end, double output_interval) {
  const double ratio = (end - start) / output_interval;
  const double rounded = std::round(ratio);
  if (rounded >= 1.0 && std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) {
    return TimeWindow::uniform(start, end, output_interval);
  }
  return TimeWindow(start, end, {start, end});
}

// Everything the loop carries from one window to the next.
struct LoopState {
  std::optional<BasisSet> basis;
  std::optional<GalerkinMatrices> matrices;
  CoefficientField field;
};

void resample_window(const PdeProblem& problem, const SpatialGrid& grid,
                     const ExpansionOptions& options,
                     const std::shared_ptr<const QuadratureRule>& rule, double step,
                     const TimeWindow& window, LoopState& state, ExpansionResult& result,
                     WindowRecord& record) {
  const std::size_t k = rule->size();
  std::vector<std::vector<Vector>> solutions(k);
  {
    StageClock clock(result.timings.sampling);
    Matrix starts;
    if (state.basis) {
      starts = reconstruct_at_nodes(state.field, *state.basis);
    } else {
      starts = problem.initial_condition(grid).transpose().replicate(static_cast<Eigen::Index>(k), 1);
    }
    const auto nodes = rule->nodes();
    parallel_for(
        k,
        [&](std::size_t l) {
          solutions[l] = solve_fixed_xi(problem, nodes[l],
                                        starts.row(static_cast<Eigen::Index>(l)).transpose(),
                                        window, grid, step);
        },
        options.workers);
  }
  std::optional<BasisSet> fresh;
  {
    StageClock clock(result.timings.svd);
    const TrajectoryMatrix t = assemble_trajectory_matrix(solutions);
    fresh.emplace(truncate_pod(t, options.pod, rule, window));
    if (options.record_residuals) {
      record.projection_residual = projection_residual(t, *fresh);
    }
  }
  const auto& sv = fresh->singular_values();
  record.singular_values = sv;
  double discarded = 0.0;
  for (std::size_t i = fresh->size(); i < sv.size(); ++i) discarded += sv[i] * sv[i];
  record.discarded_energy = discarded;

  std::optional<GalerkinMatrices> matrices;
  {
    StageClock clock(result.timings.assembly);
    matrices.emplace(assemble_matrices(*fresh, options.mass_condition_limit));
  }
  {
    StageClock clock(result.timings.change_of_basis);
    if (state.basis) {
      state.field = change_basis(state.field, *state.basis, *fresh, *matrices);
    } else {
      state.field = project_initial_condition(problem, *fresh, *matrices, grid, window.start());
    }
  }
  state.basis = std::move(fresh);
  state.matrices = std::move(matrices);
}

void advance(const PdeProblem& problem, const SpatialGrid& grid, double step,
             const TimeWindow& window, LoopState& state, ExpansionResult& result) {
  std::vector<CoefficientField> trajectory;
  {
    StageClock clock(result.timings.propagation);
    trajectory = propagate_window(problem, state.field, *state.basis, *state.matrices, window,
                                  grid, step);
  }
  state.field = trajectory.back();
  result.archive.append(*state.basis, std::move(trajectory));
}

}  // namespace

ExpansionResult run_algorithm_1(const PdeProblem& problem, const SpatialGrid& grid,
                                const ExpansionOptions& options) {
  if (!(options.t_final > options.t_start)) {
    throw InvalidArgument("run_algorithm_1: t_final must exceed t_start");
  }
  if (!(options.window_length > 0.0) || !(options.output_interval > 0.0) ||
      !(options.evolve_substep > 0.0)) {
    throw InvalidArgument("run_algorithm_1: window length, output interval and substep must be positive");
  }
  if (!options.schedule) throw InvalidArgument("run_algorithm_1: missing schedule");
  const double step = options.step > 0.0 ? options.step : default_step(grid);
  const auto rule = std::make_shared<const QuadratureRule>(
      chebyshev_trapezoid_rule(options.node_count, options.interval));

  ExpansionResult result;
  LoopState state;
  const double span = options.t_final - options.t_start;
  const auto window_count =
      static_cast<std::size_t>(std::ceil(span / options.window_length - 1e-9));

  for (std::size_t index = 1; index <= window_count; ++index) {
    const double start =
        options.t_start + options.window_length * static_cast<double>(index - 1);
    const double end = index == window_count
                           ? options.t_final
                           : options.t_start + options.window_length * static_cast<double>(index);
    const WindowAction action = options.schedule(index);
    if (index == 1 && action != WindowAction::Resample) {
      throw InvalidArgument("run_algorithm_1: the first window must resample");
    }
    if (action == WindowAction::Evolve && problem.kind != ProblemKind::Wave) {
      throw InvalidArgument("run_algorithm_1: basis evolution is implemented for the wave problem only");
    }

    WindowRecord record;
    record.index = index;
    record.start = start;
    record.end = end;
    record.action = action;

    if (action == WindowAction::Resample) {
      const TimeWindow window = output_window(start, end, options.output_interval);
      resample_window(problem, grid, options, rule, step, window, state, result, record);
      advance(problem, grid, step, window, state, result);
    } else if (action == WindowAction::Hold) {
      const TimeWindow window = output_window(start, end, options.output_interval);
      BasisSet held = state.basis->with_window(window);
      state.field.basis_id = held.id();
      state.basis = std::move(held);
      advance(problem, grid, step, window, state, result);
    } else {
      const auto substeps =
          static_cast<std::size_t>(std::ceil((end - start) / options.evolve_substep - 1e-9));
      for (std::size_t s = 0; s < substeps; ++s) {
        const double s0 = start + (end - start) * static_cast<double>(s) / static_cast<double>(substeps);
        const double s1 = s + 1 == substeps
                              ? end
                              : start + (end - start) * static_cast<double>(s + 1) /
                                            static_cast<double>(substeps);
        const TimeWindow window = output_window(s0, s1, options.output_interval);
        std::optional<BasisSet> evolved;
        {
          StageClock clock(result.timings.evolution);
          SpatialGalerkinPair pair = spatial_pair(state.field, grid);
          block_decompose(pair, options.block_condition_limit);
          evolved.emplace(evolve_basis(*state.basis, pair, s1 - s0, window));
        }
        {
          StageClock clock(result.timings.assembly);
          state.matrices.emplace(assemble_matrices(*evolved, options.mass_condition_limit));
        }
        {
          StageClock clock(result.timings.change_of_basis);
          state.field = change_basis(state.field, *state.basis, *evolved, *state.matrices);
        }
        state.basis = std::move(evolved);
        advance(problem, grid, step, window, state, result);
      }
    }
    record.basis_size = state.basis->size();
    record.mass_condition = state.matrices->condition();
    result.windows.push_back(std::move(record));
  }
  return result;
}

}  // namespace empchaos
