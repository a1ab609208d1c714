#include "empchaos/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "empchaos/errors.hpp"

namespace empchaos::io {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double parse_number(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw InvalidArgument("csv line " + std::to_string(line) + ": malformed number '" +
                          std::string(field) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

nlohmann::json matrix_rows(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_rows(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) throw InvalidArgument("archive: expected a nonempty matrix");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.front().size());
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != c) throw InvalidArgument("archive: ragged matrix");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

}  // namespace

Series make_series(const std::vector<std::pair<double, double>>& points) {
  Series s;
  s.t.reserve(points.size());
  s.value.reserve(points.size());
  for (const auto& [t, v] : points) {
    s.t.push_back(t);
    s.value.push_back(v);
  }
  return s;
}

std::string format_series_csv(const Series& series) {
  std::string out = series.stderr_ ? "t,value,stderr\n" : "t,value\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    append_number(out, series.t[i]);
    out.push_back(',');
    append_number(out, series.value[i]);
    if (series.stderr_) {
      out.push_back(',');
      append_number(out, (*series.stderr_)[i]);
    }
    out.push_back('\n');
  }
  return out;
}

Series parse_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Series s;
  if (line == "t,value,stderr") {
    s.stderr_.emplace();
  } else if (line != "t,value") {
    throw InvalidArgument("csv: unexpected header '" + line + "'");
  }
  const std::size_t expected = s.stderr_ ? 3 : 2;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != expected) {
      throw InvalidArgument("csv line " + std::to_string(number) + ": wrong field count");
    }
    s.t.push_back(parse_number(fields[0], number));
    s.value.push_back(parse_number(fields[1], number));
    if (s.stderr_) s.stderr_->push_back(parse_number(fields[2], number));
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Series read_series_csv(const std::filesystem::path& path) {
  return parse_series_csv(read_file(path));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json archive_to_json(const ExpansionArchive& archive,
                               const std::vector<WindowRecord>& records,
                               SnapshotSelection selection) {
  nlohmann::json doc;
  doc["format"] = "empchaos-archive";
  doc["version"] = 1;
  doc["windows"] = nlohmann::json::array();
  if (archive.empty()) return doc;
  const auto& first = archive.windows().front();
  const QuadratureRule& rule = first.basis.rule();
  doc["grid_points"] = first.trajectory.front().coefficients.cols();
  doc["rule"] = {{"lower", rule.interval().lower()},
                 {"upper", rule.interval().upper()},
                 {"nodes", std::vector<double>(rule.nodes().begin(), rule.nodes().end())},
                 {"weights", std::vector<double>(rule.weights().begin(), rule.weights().end())}};
  for (const auto& w : archive.windows()) {
    nlohmann::json jw;
    jw["t_start"] = w.window().start();
    jw["t_end"] = w.window().end();
    jw["output_times"] = w.window().output_times();
    // Match the window to its record by start time; evolve sub-steps share
    // their parent record.
    std::string action = "resample";
    for (const auto& r : records) {
      if (w.window().start() >= r.start - 1e-12 && w.window().start() < r.end - 1e-12) {
        action = std::string(to_string(r.action));
      }
    }
    jw["action"] = action;
    jw["basis"] = matrix_rows(w.basis.values());
    jw["singular_values"] = w.basis.singular_values();
    nlohmann::json snaps = nlohmann::json::array();
    for (std::size_t j = 0; j < w.trajectory.size(); ++j) {
      if (selection == SnapshotSelection::Endpoints && j != 0 && j + 1 != w.trajectory.size()) {
        continue;
      }
      snaps.push_back({{"t", w.trajectory[j].time},
                       {"coefficients", matrix_rows(w.trajectory[j].coefficients)}});
    }
    jw["snapshots"] = std::move(snaps);
    doc["windows"].push_back(std::move(jw));
  }
  return doc;
}

ExpansionArchive archive_from_json(const nlohmann::json& doc) {
  if (doc.value("format", "") != "empchaos-archive" || doc.value("version", 0) != 1) {
    throw InvalidArgument("archive: unsupported format");
  }
  ExpansionArchive archive;
  if (doc.at("windows").empty()) return archive;
  const auto& jr = doc.at("rule");
  const auto rule = std::make_shared<const QuadratureRule>(
      RandomInterval(jr.at("lower").get<double>(), jr.at("upper").get<double>()),
      jr.at("nodes").get<std::vector<double>>(), jr.at("weights").get<std::vector<double>>());
  for (const auto& jw : doc.at("windows")) {
    TimeWindow window(jw.at("t_start").get<double>(), jw.at("t_end").get<double>(),
                      jw.at("output_times").get<std::vector<double>>());
    BasisSet basis(matrix_from_rows(jw.at("basis")), rule, std::move(window),
                   jw.at("singular_values").get<std::vector<double>>());
    std::vector<CoefficientField> trajectory;
    for (const auto& js : jw.at("snapshots")) {
      trajectory.push_back(
          {matrix_from_rows(js.at("coefficients")), js.at("t").get<double>(), basis.id()});
    }
    archive.append(std::move(basis), std::move(trajectory));
  }
  return archive;
}

std::string basis_table_csv(const BasisSet& basis) {
  std::string out = "xi";
  for (std::size_t i = 0; i < basis.size(); ++i) out += ",psi" + std::to_string(i + 1);
  out.push_back('\n');
  const auto nodes = basis.rule().nodes();
  for (std::size_t l = 0; l < basis.node_count(); ++l) {
    append_number(out, nodes[l]);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      out.push_back(',');
      append_number(out, basis.values()(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i)));
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace empchaos::io
