#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "empchaos/errors.hpp"
#include "empchaos/io.hpp"

namespace empchaos::app {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kValidationError = 1,
  kSolverDivergence = 2,
  kComparisonFailure = 3,
};

class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : InvalidArgument(field + ": " + message), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// One experiment. Zero-valued numeric fields marked "auto" take the
/// per-problem default (wave: K = 120, window 1; advection-reaction:
/// K = 300, window 2).
struct ExperimentConfig {
  std::string problem = "wave";
  std::string solver = "empirical";  // gpc | empirical | empirical-evolve | mc | exact
  std::size_t grid_points = 256;
  std::size_t node_count = 0;        // auto
  std::size_t order = 10;            // gpc basis size
  double window = 0.0;               // auto
  double threshold = 1e-4;
  std::optional<std::size_t> basis_cap;
  std::string schedule;              // auto: "resample", or "alternate" for empirical-evolve
  double evolve_substep = 0.1;
  double t_final = 10.0;
  double step = 0.0;                 // auto: min(1e-2, h/2)
  double output_interval = 0.1;
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
  std::size_t x_index = 0;
  std::size_t workers = 0;
  std::string output_dir = "empchaos-out";
  bool write_archive = true;
  std::string archive_snapshots = "endpoints";  // endpoints | all
  bool write_basis_tables = false;
  // Wave only: also write the closed-form statistic and a comparison report.
  bool compare_exact = true;
  double compare_tolerance = 1e-2;

  std::size_t resolved_node_count() const;
  double resolved_window() const;
  std::string resolved_schedule() const;
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& config);

struct RunOutcome {
  int exit_code = kSuccess;
  std::string error;
  io::Series mean_square;
  io::Series mean;
  nlohmann::json manifest;
};

/// Runs one experiment and writes every artifact under config.output_dir:
/// mean_square.csv, mean.csv, manifest.json, and per solver
/// basis_counts.csv, singular_values/window_NNNN.csv, archive.json,
/// basis/window_NNNN.csv, exact_mean_square.csv, comparison.json.
RunOutcome run(const ExperimentConfig& config);

/// Closed-form wave mean-square series on the output grid of `config`.
io::Series exact_series(const ExperimentConfig& config);

struct CompareReport {
  double max_abs = 0.0;
  double rms = 0.0;
  double worst_time = 0.0;
  double overlap_start = 0.0;
  double overlap_end = 0.0;
  std::size_t points = 0;
  double tolerance = 0.0;
  double stderr_multiple = 0.0;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Deviation of `a` from `b` over their overlapping time range; `b` is
/// linearly interpolated onto the times of `a`. When `stderr_multiple` is
/// positive and `b` carries a stderr column, a point passes if
/// |a - b| <= tolerance + stderr_multiple * stderr_b.
CompareReport compare(const io::Series& a, const io::Series& b, double tolerance,
                      double stderr_multiple = 0.0);
CompareReport compare_files(const std::filesystem::path& a, const std::filesystem::path& b,
                            double tolerance, double stderr_multiple = 0.0);

struct ScalingRow {
  double t_final = 0.0;
  double empirical_seconds = 0.0;
  std::size_t gpc_order = 0;
  double gpc_seconds = -1.0;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  double linear_slope = 0.0;
  double linear_intercept = 0.0;
  double linear_r2 = 0.0;
  std::optional<double> gpc_exponent;
  std::optional<double> crossover_time;  // first horizon where gPC is slower

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct ScalingOptions {
  std::vector<double> t_finals;
  bool include_gpc = false;
  // gPC order at horizon T is max(1, ceil(gpc_orders_per_time * T + gpc_order_offset)),
  // capped at kGpcMaxOrder.
  double gpc_orders_per_time = 0.5;
  double gpc_order_offset = 0.0;
  std::size_t repeats = 1;  // best-of timing
};

/// Times the empirical solver (and optionally gPC) at each horizon, fits
/// time = a + b*T for the empirical solver and time ~ T^p for gPC.
ScalingReport scaling_study(const ExperimentConfig& base, const ScalingOptions& options);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace empchaos::app
