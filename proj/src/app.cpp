#include "empchaos/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "empchaos/basis_evolution.hpp"
#include "empchaos/empirical_chaos.hpp"
#include "empchaos/gpc.hpp"
#include "empchaos/montecarlo.hpp"
#include "empchaos/pde_core.hpp"

namespace empchaos::app {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

const std::set<std::string> kSolvers = {"gpc", "empirical", "empirical-evolve", "mc", "exact"};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_wave(const ExperimentConfig& c) { return c.problem == "wave"; }

template <typename T>
void read_field(const json& doc, const char* key, T& out) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "has the wrong type");
  }
}

void read_count(const json& doc, const char* key, std::size_t& out) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return;
  if (it->is_number_integer() && it->get<long long>() < 0) {
    throw ConfigError(key, "must be positive");
  }
  if (!it->is_number_unsigned() && !it->is_number_integer()) {
    throw ConfigError(key, "must be a nonnegative integer");
  }
  out = it->get<std::size_t>();
}

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(field, "must be positive");
}

std::vector<double> output_grid(double t_final, double dt) {
  std::vector<double> t;
  const auto n = static_cast<std::size_t>(std::llround(t_final / dt));
  if (n >= 1 && std::abs(static_cast<double>(n) * dt - t_final) <= 1e-9 * t_final) {
    for (std::size_t j = 0; j <= n; ++j) t.push_back(t_final * static_cast<double>(j) / static_cast<double>(n));
  } else {
    for (double s = 0.0; s < t_final - 1e-12; s += dt) t.push_back(s);
    t.push_back(t_final);
  }
  return t;
}

struct SolveOutput {
  io::Series mean_square;
  io::Series mean;
  std::optional<ExpansionResult> expansion;
  json timings = json::object();
  json diagnostics = json::object();
  double wall = 0.0;
};

ExpansionOptions expansion_options(const ExperimentConfig& c) {
  ExpansionOptions o;
  o.node_count = c.resolved_node_count();
  o.t_final = c.t_final;
  o.window_length = c.resolved_window();
  o.output_interval = c.output_interval;
  o.step = c.step;
  o.pod.threshold = c.threshold;
  o.pod.cap = c.basis_cap;
  o.evolve_substep = c.evolve_substep;
  o.schedule = schedule_from_string(c.resolved_schedule());
  o.workers = c.workers;
  o.record_residuals = true;
  return o;
}

SolveOutput solve(const ExperimentConfig& c) {
  const PdeProblem problem = is_wave(c) ? PdeProblem::wave() : PdeProblem::advection_reaction();
  const SpatialGrid grid(c.grid_points);
  SolveOutput out;
  const auto start = Clock::now();

  if (c.solver == "empirical" || c.solver == "empirical-evolve") {
    ExpansionResult result = run_algorithm_1(problem, grid, expansion_options(c));
    out.wall = seconds_since(start);
    out.mean_square = io::make_series(statistic_series(result.archive, c.x_index, Statistic::MeanSquare));
    out.mean = io::make_series(statistic_series(result.archive, c.x_index, Statistic::Mean));
    const auto& tm = result.timings;
    out.timings = {{"sampling", tm.sampling},
                   {"svd", tm.svd},
                   {"change_of_basis", tm.change_of_basis},
                   {"assembly", tm.assembly},
                   {"propagation", tm.propagation},
                   {"evolution", tm.evolution}};
    std::size_t largest = 0;
    for (const auto& w : result.windows) largest = std::max(largest, w.basis_size);
    out.diagnostics["windows"] = result.windows.size();
    out.diagnostics["max_basis_size"] = largest;
    out.expansion = std::move(result);
  } else if (c.solver == "gpc") {
    const double step = c.step > 0.0 ? c.step : default_step(grid);
    const TimeWindow window(0.0, c.t_final, output_grid(c.t_final, c.output_interval));
    auto t0 = Clock::now();
    const GpcSystem system(problem, c.order, grid);
    const double assembly = seconds_since(t0);
    t0 = Clock::now();
    const auto states = integrate_ode(system, system.initial_coefficients(), window, step);
    const double propagation = seconds_since(t0);
    out.wall = seconds_since(start);
    for (std::size_t j = 0; j < states.size(); ++j) {
      const CoefficientField f{states[j], window.output_times()[j], 0};
      out.mean_square.t.push_back(f.time);
      out.mean_square.value.push_back(gpc_mean_square(f, c.x_index));
      out.mean.t.push_back(f.time);
      out.mean.value.push_back(gpc_mean(f, c.x_index));
    }
    out.timings = {{"assembly", assembly}, {"propagation", propagation}};
    out.diagnostics["order"] = c.order;
    out.diagnostics["beyond_stable_order"] = system.beyond_stable_order();
  } else if (c.solver == "mc") {
    McConfig mc;
    mc.sample_count = c.samples;
    mc.seed = c.seed;
    mc.problem = problem;
    mc.grid_points = c.grid_points;
    mc.t_final = c.t_final;
    mc.output_interval = c.output_interval;
    mc.step = c.step;
    mc.workers = c.workers;
    const McStatistics stats = mc_statistics(mc);
    out.wall = seconds_since(start);
    const auto x = static_cast<Eigen::Index>(c.x_index);
    out.mean_square.t = stats.times;
    out.mean.t = stats.times;
    out.mean_square.stderr_.emplace();
    out.mean.stderr_.emplace();
    for (std::size_t j = 0; j < stats.times.size(); ++j) {
      const auto r = static_cast<Eigen::Index>(j);
      out.mean_square.value.push_back(stats.mean_square(r, x));
      out.mean_square.stderr_->push_back(stats.mean_square_stderr(r, x));
      out.mean.value.push_back(stats.mean(r, x));
      out.mean.stderr_->push_back(stats.mean_stderr(r, x));
    }
    out.timings = {{"sampling", out.wall}};
    out.diagnostics["used_samples"] = stats.used_samples;
    out.diagnostics["diverged_samples"] = stats.diverged_samples;
  } else {
    out.mean_square = exact_series(c);
    const double x = grid.x(c.x_index);
    out.mean.t = out.mean_square.t;
    for (double t : out.mean.t) out.mean.value.push_back(exact_wave_mean(x, t));
    out.wall = seconds_since(start);
    out.timings = {{"evaluation", out.wall}};
  }
  return out;
}

std::string window_file(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "window_%04zu.csv", index);
  return buf;
}

std::string singular_values_csv(const std::vector<double>& sv) {
  std::ostringstream os;
  os.precision(17);
  os << "index,sigma,sigma_scaled\n";
  const double top = sv.empty() ? 1.0 : sv.front();
  for (std::size_t i = 0; i < sv.size(); ++i) {
    os << i + 1 << ',' << sv[i] << ',' << (top > 0.0 ? sv[i] / top : 0.0) << '\n';
  }
  return os.str();
}

std::string basis_counts_csv(const std::vector<WindowRecord>& records) {
  std::ostringstream os;
  os.precision(17);
  os << "window,t_start,t_end,action,basis_size,mass_condition\n";
  for (const auto& r : records) {
    os << r.index << ',' << r.start << ',' << r.end << ',' << to_string(r.action) << ','
       << r.basis_size << ',' << r.mass_condition << '\n';
  }
  return os.str();
}

double interpolate(const io::Series& s, double t) {
  const auto& ts = s.t;
  auto it = std::lower_bound(ts.begin(), ts.end(), t);
  if (it == ts.end()) return s.value.back();
  const auto j = static_cast<std::size_t>(it - ts.begin());
  if (*it == t || j == 0) return s.value[j];
  const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
  return (1.0 - w) * s.value[j - 1] + w * s.value[j];
}

double interpolate_stderr(const io::Series& s, double t) {
  const auto& ts = s.t;
  auto it = std::lower_bound(ts.begin(), ts.end(), t);
  if (it == ts.end()) return s.stderr_->back();
  const auto j = static_cast<std::size_t>(it - ts.begin());
  if (*it == t || j == 0) return (*s.stderr_)[j];
  const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
  return (1.0 - w) * (*s.stderr_)[j - 1] + w * (*s.stderr_)[j];
}

}  // namespace

std::size_t ExperimentConfig::resolved_node_count() const {
  if (node_count > 0) return node_count;
  return is_wave(*this) ? 120 : 300;
}

double ExperimentConfig::resolved_window() const {
  if (window > 0.0) return window;
  return is_wave(*this) ? 1.0 : 2.0;
}

std::string ExperimentConfig::resolved_schedule() const {
  if (!schedule.empty()) return schedule;
  return solver == "empirical-evolve" ? "alternate" : "resample";
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "must be a JSON object");
  static const std::set<std::string> known = {
      "problem", "solver", "grid_points", "node_count", "order", "window", "threshold",
      "basis_cap", "schedule", "evolve_substep", "t_final", "step", "output_interval", "seed",
      "samples", "x_index", "workers", "output_dir", "write_archive", "archive_snapshots",
      "write_basis_tables", "compare_exact", "compare_tolerance"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError(key, "unknown field");
  }
  ExperimentConfig c;
  read_field(doc, "problem", c.problem);
  read_field(doc, "solver", c.solver);
  read_count(doc, "grid_points", c.grid_points);
  read_count(doc, "node_count", c.node_count);
  read_count(doc, "order", c.order);
  read_field(doc, "window", c.window);
  read_field(doc, "threshold", c.threshold);
  if (doc.contains("basis_cap") && !doc["basis_cap"].is_null()) {
    std::size_t cap = 0;
    read_count(doc, "basis_cap", cap);
    c.basis_cap = cap;
  }
  read_field(doc, "schedule", c.schedule);
  read_field(doc, "evolve_substep", c.evolve_substep);
  read_field(doc, "t_final", c.t_final);
  read_field(doc, "step", c.step);
  read_field(doc, "output_interval", c.output_interval);
  read_field(doc, "seed", c.seed);
  read_count(doc, "samples", c.samples);
  read_count(doc, "x_index", c.x_index);
  read_count(doc, "workers", c.workers);
  read_field(doc, "output_dir", c.output_dir);
  read_field(doc, "write_archive", c.write_archive);
  read_field(doc, "archive_snapshots", c.archive_snapshots);
  read_field(doc, "write_basis_tables", c.write_basis_tables);
  read_field(doc, "compare_exact", c.compare_exact);
  read_field(doc, "compare_tolerance", c.compare_tolerance);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json doc = {{"problem", c.problem},
              {"solver", c.solver},
              {"grid_points", c.grid_points},
              {"node_count", c.resolved_node_count()},
              {"order", c.order},
              {"window", c.resolved_window()},
              {"threshold", c.threshold},
              {"basis_cap", nullptr},
              {"schedule", c.resolved_schedule()},
              {"evolve_substep", c.evolve_substep},
              {"t_final", c.t_final},
              {"step", c.step},
              {"output_interval", c.output_interval},
              {"seed", c.seed},
              {"samples", c.samples},
              {"x_index", c.x_index},
              {"workers", c.workers},
              {"output_dir", c.output_dir},
              {"write_archive", c.write_archive},
              {"archive_snapshots", c.archive_snapshots},
              {"write_basis_tables", c.write_basis_tables},
              {"compare_exact", c.compare_exact},
              {"compare_tolerance", c.compare_tolerance}};
  if (c.basis_cap) doc["basis_cap"] = *c.basis_cap;
  return doc;
}

ExperimentConfig load_config(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("not valid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

void validate(const ExperimentConfig& c) {
  if (c.problem != "wave" && c.problem != "advection-reaction") {
    throw ConfigError("problem", "must be 'wave' or 'advection-reaction'");
  }
  if (!kSolvers.count(c.solver)) {
    throw ConfigError("solver", "must be one of gpc, empirical, empirical-evolve, mc, exact");
  }
  if (c.grid_points < 3) throw ConfigError("grid_points", "must be at least 3");
  if (c.x_index >= c.grid_points) throw ConfigError("x_index", "must be below grid_points");
  require_positive(c.t_final, "t_final");
  require_positive(c.output_interval, "output_interval");
  if (c.step < 0.0 || !std::isfinite(c.step)) throw ConfigError("step", "must be positive (or 0 for auto)");
  // |xi| <= 1 on the default support, so the advective limit is h / 2.
  if (c.step > 0.0 && c.solver != "exact" && c.step > 0.5 * SpatialGrid(c.grid_points).spacing()) {
    throw ConfigError("step", "exceeds the stability limit h/2 for this grid");
  }
  if (c.window < 0.0 || !std::isfinite(c.window)) throw ConfigError("window", "must be positive (or 0 for auto)");
  if (c.archive_snapshots != "endpoints" && c.archive_snapshots != "all") {
    throw ConfigError("archive_snapshots", "must be 'endpoints' or 'all'");
  }
  require_positive(c.compare_tolerance, "compare_tolerance");

  if (c.solver == "empirical" || c.solver == "empirical-evolve") {
    if (c.resolved_node_count() < 2) throw ConfigError("node_count", "must be at least 2");
    if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw ConfigError("threshold", "must lie in (0, 1)");
    if (c.basis_cap && *c.basis_cap == 0) throw ConfigError("basis_cap", "must be positive");
    require_positive(c.evolve_substep, "evolve_substep");
    try {
      (void)schedule_from_string(c.resolved_schedule());
    } catch (const InvalidArgument&) {
      throw ConfigError("schedule",
                        "must be resample, alternate, alternate-hold, evolve-after-first or "
                        "hold-after-first");
    }
    if (c.solver == "empirical" && c.resolved_schedule() != "resample") {
      throw ConfigError("schedule", "solver 'empirical' always resamples; use empirical-evolve");
    }
    if (c.solver == "empirical-evolve" && !is_wave(c)) {
      const auto s = c.resolved_schedule();
      if (s == "alternate" || s == "evolve-after-first") {
        throw ConfigError("schedule", "basis evolution is available for the wave problem only");
      }
    }
  }
  if (c.solver == "gpc") {
    if (c.order < 1) throw ConfigError("order", "must be positive");
    if (c.order > kGpcMaxOrder) {
      throw ConfigError("order", "must not exceed " + std::to_string(kGpcMaxOrder));
    }
  }
  if (c.solver == "mc" && c.samples < 2) throw ConfigError("samples", "must be at least 2");
  if (c.solver == "exact" && !is_wave(c)) {
    throw ConfigError("problem", "the exact solver exists for the wave problem only");
  }
}

io::Series exact_series(const ExperimentConfig& c) {
  const double x = SpatialGrid(c.grid_points).x(c.x_index);
  io::Series s;
  s.t = output_grid(c.t_final, c.output_interval);
  for (double t : s.t) s.value.push_back(exact_wave_mean_square(x, t));
  return s;
}

RunOutcome run(const ExperimentConfig& config) {
  RunOutcome outcome;
  const fs::path dir(config.output_dir);
  json manifest = {{"config", config_to_json(config)}};
  try {
    validate(config);
  } catch (const ConfigError& e) {
    outcome.exit_code = kValidationError;
    outcome.error = e.what();
    outcome.manifest = manifest;
    return outcome;
  }
  fs::create_directories(dir);

  SolveOutput out;
  try {
    out = solve(config);
  } catch (const Error& e) {
    outcome.exit_code = kSolverDivergence;
    outcome.error = e.what();
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    io::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    outcome.manifest = manifest;
    return outcome;
  }

  io::write_file_atomic(dir / "mean_square.csv", io::format_series_csv(out.mean_square));
  io::write_file_atomic(dir / "mean.csv", io::format_series_csv(out.mean));

  if (out.expansion) {
    const auto& records = out.expansion->windows;
    io::write_file_atomic(dir / "basis_counts.csv", basis_counts_csv(records));
    fs::create_directories(dir / "singular_values");
    for (const auto& r : records) {
      if (r.action != WindowAction::Resample) continue;
      io::write_file_atomic(dir / "singular_values" / window_file(r.index),
                            singular_values_csv(r.singular_values));
    }
    if (config.write_archive) {
      const auto sel = config.archive_snapshots == "all" ? io::SnapshotSelection::All
                                                         : io::SnapshotSelection::Endpoints;
      io::write_file_atomic(dir / "archive.json",
                            io::archive_to_json(out.expansion->archive, records, sel).dump() + "\n");
    }
    if (config.write_basis_tables) {
      fs::create_directories(dir / "basis");
      std::size_t i = 0;
      for (const auto& w : out.expansion->archive.windows()) {
        io::write_file_atomic(dir / "basis" / window_file(++i), io::basis_table_csv(w.basis));
      }
    }
    json residuals = json::array();
    for (const auto& r : records) {
      residuals.push_back({{"window", r.index},
                           {"action", std::string(to_string(r.action))},
                           {"basis_size", r.basis_size},
                           {"projection_residual", r.projection_residual},
                           {"discarded_energy", r.discarded_energy}});
    }
    manifest["windows"] = residuals;
  }

  if (config.compare_exact && is_wave(config) && config.solver != "exact") {
    const io::Series exact = exact_series(config);
    io::write_file_atomic(dir / "exact_mean_square.csv", io::format_series_csv(exact));
    const CompareReport report = compare(out.mean_square, exact, config.compare_tolerance);
    io::write_file_atomic(dir / "comparison.json", report.to_json().dump(2) + "\n");
    manifest["comparison"] = report.to_json();
  }

  double stage_sum = 0.0;
  for (const auto& [k, v] : out.timings.items()) stage_sum += v.get<double>();
  manifest["status"] = "ok";
  manifest["timings"] = {{"stages", out.timings}, {"stage_sum", stage_sum}, {"total", out.wall}};
  manifest["diagnostics"] = out.diagnostics;
  io::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  outcome.mean_square = std::move(out.mean_square);
  outcome.mean = std::move(out.mean);
  outcome.manifest = std::move(manifest);
  return outcome;
}

json CompareReport::to_json() const {
  return {{"max_abs", max_abs},
          {"rms", rms},
          {"worst_time", worst_time},
          {"overlap_start", overlap_start},
          {"overlap_end", overlap_end},
          {"points", points},
          {"tolerance", tolerance},
          {"stderr_multiple", stderr_multiple},
          {"pass", pass}};
}

CompareReport compare(const io::Series& a, const io::Series& b, double tolerance,
                      double stderr_multiple) {
  if (a.size() == 0 || b.size() == 0) throw InvalidArgument("compare: empty series");
  if (!(tolerance >= 0.0)) throw InvalidArgument("compare: tolerance must be nonnegative");
  CompareReport r;
  r.tolerance = tolerance;
  r.stderr_multiple = stderr_multiple;
  r.overlap_start = std::max(a.t.front(), b.t.front());
  r.overlap_end = std::min(a.t.back(), b.t.back());
  if (r.overlap_start > r.overlap_end) {
    throw InvalidArgument("compare: time ranges do not overlap");
  }
  const bool use_stderr = stderr_multiple > 0.0 && b.stderr_.has_value();
  const double slack = 1e-12 * std::max(1.0, std::abs(r.overlap_end));
  double sum_sq = 0.0;
  bool pass = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a.t[i];
    if (t < r.overlap_start - slack || t > r.overlap_end + slack) continue;
    const double d = std::abs(a.value[i] - interpolate(b, t));
    const double allowed = tolerance + (use_stderr ? stderr_multiple * interpolate_stderr(b, t) : 0.0);
    if (!(d <= allowed)) pass = false;
    if (d > r.max_abs || std::isnan(d)) {
      r.max_abs = std::isnan(d) ? std::numeric_limits<double>::infinity() : d;
      r.worst_time = t;
    }
    sum_sq += d * d;
    ++r.points;
  }
  if (r.points == 0) throw InvalidArgument("compare: no samples of A fall in the overlap");
  r.rms = std::sqrt(sum_sq / static_cast<double>(r.points));
  r.pass = pass;
  return r;
}

CompareReport compare_files(const fs::path& a, const fs::path& b, double tolerance,
                            double stderr_multiple) {
  return compare(io::read_series_csv(a), io::read_series_csv(b), tolerance, stderr_multiple);
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_line: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

json ScalingReport::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows) {
    json row = {{"t_final", r.t_final}, {"empirical_seconds", r.empirical_seconds}};
    if (r.gpc_seconds >= 0.0) {
      row["gpc_order"] = r.gpc_order;
      row["gpc_seconds"] = r.gpc_seconds;
    }
    rows_json.push_back(row);
  }
  json doc = {{"rows", rows_json},
              {"empirical_fit", {{"slope", linear_slope}, {"intercept", linear_intercept}, {"r2", linear_r2}}}};
  doc["gpc_exponent"] = gpc_exponent ? json(*gpc_exponent) : json(nullptr);
  doc["crossover_time"] = crossover_time ? json(*crossover_time) : json(nullptr);
  return doc;
}

std::string ScalingReport::to_csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "t_final,empirical_seconds,gpc_order,gpc_seconds\n";
  for (const auto& r : rows) {
    os << r.t_final << ',' << r.empirical_seconds << ',';
    if (r.gpc_seconds >= 0.0) os << r.gpc_order << ',' << r.gpc_seconds;
    else os << ',';
    os << '\n';
  }
  return os.str();
}

ScalingReport scaling_study(const ExperimentConfig& base, const ScalingOptions& options) {
  if (options.t_finals.size() < 3) {
    throw InvalidArgument("scaling_study: at least three horizons are required");
  }
  if (options.repeats < 1) throw InvalidArgument("scaling_study: repeats must be positive");
  ExperimentConfig empirical = base;
  if (empirical.solver != "empirical-evolve") empirical.solver = "empirical";

  auto best_of = [&](const ExperimentConfig& c) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < options.repeats; ++i) best = std::min(best, solve(c).wall);
    return best;
  };

  ScalingReport report;
  for (double t : options.t_finals) {
    ScalingRow row;
    row.t_final = t;
    empirical.t_final = t;
    validate(empirical);
    row.empirical_seconds = best_of(empirical);
    if (options.include_gpc) {
      ExperimentConfig g = base;
      g.solver = "gpc";
      g.t_final = t;
      g.order = std::min<std::size_t>(
          kGpcMaxOrder,
          std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(options.gpc_orders_per_time * t + options.gpc_order_offset))));
      validate(g);
      row.gpc_order = g.order;
      row.gpc_seconds = best_of(g);
    }
    report.rows.push_back(row);
  }

  std::vector<double> ts, es;
  for (const auto& r : report.rows) {
    ts.push_back(r.t_final);
    es.push_back(r.empirical_seconds);
  }
  const LinearFit lin = fit_line(ts, es);
  report.linear_slope = lin.slope;
  report.linear_intercept = lin.intercept;
  report.linear_r2 = lin.r2;

  if (options.include_gpc) {
    std::vector<double> lt, lg;
    for (const auto& r : report.rows) {
      lt.push_back(std::log(r.t_final));
      lg.push_back(std::log(std::max(r.gpc_seconds, 1e-9)));
    }
    report.gpc_exponent = fit_line(lt, lg).slope;
    for (const auto& r : report.rows) {
      if (r.gpc_seconds > r.empirical_seconds) {
        report.crossover_time = r.t_final;
        break;
      }
    }
  }
  return report;
}

}  // namespace empchaos::app
