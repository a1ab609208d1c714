// Command-line front end: run, exact, compare, scaling-study.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "empchaos/app.hpp"

namespace {

using empchaos::app::ExperimentConfig;

// Flags that override fields of the loaded config. Optionals stay empty
// unless the flag was given.
struct Overrides {
  std::string config_path;
  std::optional<std::string> problem, solver, schedule, output_dir, archive_snapshots;
  std::optional<std::size_t> grid_points, node_count, order, basis_cap, samples, x_index, workers;
  std::optional<double> window, threshold, t_final, step, output_interval, evolve_substep,
      compare_tolerance;
  std::optional<std::uint64_t> seed;
  bool basis_tables = false;
  bool no_archive = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("-c,--config", config_path, "JSON experiment config");
    cmd.add_option("--problem", problem, "wave | advection-reaction");
    cmd.add_option("--solver", solver, "gpc | empirical | empirical-evolve | mc | exact");
    cmd.add_option("--schedule", schedule, "resample schedule for empirical-evolve");
    cmd.add_option("-o,--output-dir", output_dir, "output directory");
    cmd.add_option("--archive-snapshots", archive_snapshots, "endpoints | all");
    cmd.add_option("--grid-points", grid_points, "spatial grid size M");
    cmd.add_option("--nodes", node_count, "quadrature node count K");
    cmd.add_option("--order", order, "gPC basis size");
    cmd.add_option("--basis-cap", basis_cap, "maximum basis functions per window");
    cmd.add_option("--samples", samples, "Monte Carlo sample count");
    cmd.add_option("--x-index", x_index, "grid index of the reported statistic");
    cmd.add_option("--workers", workers, "worker threads (0 = all cores)");
    cmd.add_option("--window", window, "time window length");
    cmd.add_option("--threshold", threshold, "relative singular-value threshold");
    cmd.add_option("--t-final", t_final, "final time");
    cmd.add_option("--step", step, "RK4 step (0 = auto)");
    cmd.add_option("--output-interval", output_interval, "spacing of output times");
    cmd.add_option("--evolve-substep", evolve_substep, "basis evolution sub-step");
    cmd.add_option("--compare-tolerance", compare_tolerance, "tolerance of the exact comparison");
    cmd.add_option("--seed", seed, "Monte Carlo seed");
    cmd.add_flag("--basis-tables", basis_tables, "write basis values per window");
    cmd.add_flag("--no-archive", no_archive, "skip archive.json");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : empchaos::app::load_config(config_path);
    if (problem) c.problem = *problem;
    if (solver) c.solver = *solver;
    if (schedule) c.schedule = *schedule;
    if (output_dir) c.output_dir = *output_dir;
    if (archive_snapshots) c.archive_snapshots = *archive_snapshots;
    if (grid_points) c.grid_points = *grid_points;
    if (node_count) c.node_count = *node_count;
    if (order) c.order = *order;
    if (basis_cap) c.basis_cap = *basis_cap;
    if (samples) c.samples = *samples;
    if (x_index) c.x_index = *x_index;
    if (workers) c.workers = *workers;
    if (window) c.window = *window;
    if (threshold) c.threshold = *threshold;
    if (t_final) c.t_final = *t_final;
    if (step) c.step = *step;
    if (output_interval) c.output_interval = *output_interval;
    if (evolve_substep) c.evolve_substep = *evolve_substep;
    if (compare_tolerance) c.compare_tolerance = *compare_tolerance;
    if (seed) c.seed = *seed;
    if (basis_tables) c.write_basis_tables = true;
    if (no_archive) c.write_archive = false;
    return c;
  }
};

int cmd_run(const Overrides& o) {
  const auto outcome = empchaos::app::run(o.resolve());
  if (outcome.exit_code != 0) {
    std::cerr << "error: " << outcome.error << '\n';
    return outcome.exit_code;
  }
  std::cout << outcome.manifest["timings"].dump() << '\n';
  if (outcome.manifest.contains("comparison")) {
    std::cout << "exact comparison: " << outcome.manifest["comparison"].dump() << '\n';
  }
  return 0;
}

int cmd_exact(Overrides o, const std::optional<std::string>& out_file) {
  o.solver = "exact";
  ExperimentConfig c = o.resolve();
  c.solver = "exact";
  empchaos::app::validate(c);
  const std::string csv = empchaos::io::format_series_csv(empchaos::app::exact_series(c));
  if (out_file) {
    empchaos::io::write_file_atomic(*out_file, csv);
  } else {
    std::cout << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Empirical chaos expansion experiments"};
  cli.require_subcommand(1);

  Overrides run_opts;
  auto* run = cli.add_subcommand("run", "run one experiment and write its outputs");
  run_opts.attach(*run);

  Overrides exact_opts;
  std::optional<std::string> exact_out;
  auto* exact = cli.add_subcommand("exact", "closed-form wave mean square as CSV");
  exact_opts.attach(*exact);
  exact->add_option("--out", exact_out, "write to this file instead of stdout");

  std::string cmp_a, cmp_b, cmp_report;
  double cmp_tol = 1e-2;
  double cmp_stderr = 0.0;
  auto* cmp = cli.add_subcommand("compare", "deviation between two series CSVs");
  cmp->add_option("a", cmp_a, "series A")->required();
  cmp->add_option("b", cmp_b, "series B (interpolated onto the times of A)")->required();
  cmp->add_option("-t,--tolerance", cmp_tol, "max-abs tolerance");
  cmp->add_option("--stderr-multiple", cmp_stderr, "add this many stderr of B to the tolerance");
  cmp->add_option("--report", cmp_report, "write the JSON report here");

  Overrides scale_opts;
  std::vector<double> horizons;
  bool with_gpc = false;
  double orders_per_time = 0.5;
  double order_offset = 0.0;
  std::size_t repeats = 1;
  std::string scale_out;
  auto* scale = cli.add_subcommand("scaling-study", "wall time against final time");
  scale_opts.attach(*scale);
  scale->add_option("--horizons", horizons, "final times (at least three)")->required()->delimiter(',');
  scale->add_flag("--gpc", with_gpc, "also time gPC with order growing with the horizon");
  scale->add_option("--gpc-orders-per-time", orders_per_time, "gPC order per unit time");
  scale->add_option("--gpc-order-offset", order_offset, "constant added to the gPC order");
  scale->add_option("--repeats", repeats, "best-of repetitions");
  scale->add_option("--report", scale_out, "write the JSON report here");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : empchaos::app::kValidationError;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*exact) return cmd_exact(exact_opts, exact_out);
    if (*cmp) {
      const auto report = empchaos::app::compare_files(cmp_a, cmp_b, cmp_tol, cmp_stderr);
      const std::string text = report.to_json().dump(2) + "\n";
      if (!cmp_report.empty()) empchaos::io::write_file_atomic(cmp_report, text);
      std::cout << text;
      return report.pass ? 0 : empchaos::app::kComparisonFailure;
    }
    if (*scale) {
      empchaos::app::ScalingOptions so;
      so.t_finals = horizons;
      so.include_gpc = with_gpc;
      so.gpc_orders_per_time = orders_per_time;
      so.gpc_order_offset = order_offset;
      so.repeats = repeats;
      const auto report = empchaos::app::scaling_study(scale_opts.resolve(), so);
      const std::string text = report.to_json().dump(2) + "\n";
      if (!scale_out.empty()) empchaos::io::write_file_atomic(scale_out, text);
      std::cout << report.to_csv() << text;
      return 0;
    }
  } catch (const empchaos::IntegrationDiverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return empchaos::app::kSolverDivergence;
  } catch (const empchaos::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return empchaos::app::kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return empchaos::app::kSolverDivergence;
  }
  return 0;
}
