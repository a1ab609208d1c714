#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "empchaos/empirical_chaos.hpp"
#include "empchaos/galerkin.hpp"

namespace empchaos::io {

/// A statistic time series as written to disk: "t,value" or
/// "t,value,stderr".
struct Series {
  std::vector<double> t;
  std::vector<double> value;
  std::optional<std::vector<double>> stderr_;

  std::size_t size() const noexcept { return t.size(); }
};

Series make_series(const std::vector<std::pair<double, double>>& points);

std::string format_series_csv(const Series& series);
Series parse_series_csv(const std::string& text);
Series read_series_csv(const std::filesystem::path& path);

/// Writes through a temporary file in the same directory and renames it
/// into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

enum class SnapshotSelection { Endpoints, All };

/// Archive layout:
///   { "format": "empchaos-archive", "version": 1, "grid_points": M,
///     "rule": {"lower", "upper", "nodes": [K], "weights": [K]},
///     "windows": [ { "t_start", "t_end", "action", "basis": [[N_b] x K],
///                    "singular_values": [...],
///                    "snapshots": [ {"t", "coefficients": [[M] x N_b]} ] } ] }
nlohmann::json archive_to_json(const ExpansionArchive& archive,
                               const std::vector<WindowRecord>& records,
                               SnapshotSelection selection = SnapshotSelection::All);
ExpansionArchive archive_from_json(const nlohmann::json& doc);

std::string basis_table_csv(const BasisSet& basis);

}  // namespace empchaos::io
