#include "empchaos/montecarlo.hpp"

#include <cmath>

#include "empchaos/errors.hpp"
#include "empchaos/parallel.hpp"

namespace empchaos {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Sums {
  Matrix u;
  Matrix u2;
  Matrix u4;
  std::size_t count = 0;
  std::size_t diverged = 0;

  Sums(Eigen::Index rows, Eigen::Index cols)
      : u(Matrix::Zero(rows, cols)), u2(Matrix::Zero(rows, cols)), u4(Matrix::Zero(rows, cols)) {}

  void add(const Sums& other) {
    u += other.u;
    u2 += other.u2;
    u4 += other.u4;
    count += other.count;
    diverged += other.diverged;
  }
};

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ index);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

McStatistics mc_statistics(const McConfig& config) {
  if (config.sample_count < 1) throw InvalidArgument("mc_statistics: sample_count must be >= 1");
  const SpatialGrid grid(config.grid_points);
  const double step = config.step > 0.0 ? config.step : default_step(grid);
  const TimeWindow window = TimeWindow::uniform(0.0, config.t_final, config.output_interval);
  const Vector initial = config.problem.initial_condition(grid);
  const auto rows = static_cast<Eigen::Index>(window.output_times().size());
  const auto cols = static_cast<Eigen::Index>(grid.size());

  const std::size_t block_count = (config.sample_count + kMcBlockSize - 1) / kMcBlockSize;
  const std::size_t wave = worker_count(config.workers);
  Sums total(rows, cols);

  for (std::size_t first_block = 0; first_block < block_count; first_block += wave) {
    const std::size_t blocks_now = std::min(wave, block_count - first_block);
    std::vector<Sums> partial(blocks_now, Sums(rows, cols));
    parallel_for(
        blocks_now,
        [&](std::size_t b) {
          Sums& sums = partial[b];
          const std::size_t begin = (first_block + b) * kMcBlockSize;
          const std::size_t end = std::min(begin + kMcBlockSize, config.sample_count);
          for (std::size_t s = begin; s < end; ++s) {
            const double xi = config.fixed_xi
                                  ? *config.fixed_xi
                                  : config.interval.lower() +
                                        config.interval.length() * counter_uniform(config.seed, s);
            std::vector<Vector> states;
            try {
              states = solve_fixed_xi(config.problem, xi, initial, window, grid, step);
            } catch (const IntegrationDiverged&) {
              ++sums.diverged;
              continue;
            }
            for (Eigen::Index j = 0; j < rows; ++j) {
              const auto& v = states[static_cast<std::size_t>(j)];
              const auto sq = v.array().square();
              sums.u.row(j) += v.transpose();
              sums.u2.row(j) += sq.matrix().transpose();
              sums.u4.row(j) += sq.square().matrix().transpose();
            }
            ++sums.count;
          }
        },
        config.workers);
    for (const auto& p : partial) total.add(p);
  }

  McStatistics out;
  out.times = window.output_times();
  out.used_samples = total.count;
  out.diverged_samples = total.diverged;
  if (total.count == 0) {
    throw IntegrationDiverged("mc_statistics: every sample diverged", config.t_final);
  }
  const double n = static_cast<double>(total.count);
  out.mean = total.u / n;
  out.mean_square = total.u2 / n;
  const double denom = total.count > 1 ? n * (n - 1.0) : 1.0;
  const double scale = total.count > 1 ? 1.0 : 0.0;
  // Unbiased sample variance divided by n, clipped at zero for roundoff.
  out.mean_stderr =
      (scale * (total.u2 - total.u.cwiseProduct(total.u) / n) / denom).cwiseMax(0.0).cwiseSqrt();
  out.mean_square_stderr =
      (scale * (total.u4 - total.u2.cwiseProduct(total.u2) / n) / denom).cwiseMax(0.0).cwiseSqrt();
  return out;
}

}  // namespace empchaos
