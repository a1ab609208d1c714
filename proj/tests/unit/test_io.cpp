#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "empchaos/errors.hpp"
#include "empchaos/io.hpp"

using namespace empchaos;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("empchaos_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExpansionResult small_expansion() {
  ExpansionOptions o;
  o.node_count = 20;
  o.t_final = 2.0;
  o.output_interval = 0.25;
  return run_empirical_chaos(PdeProblem::wave(), SpatialGrid(16), o);
}

}  // namespace

TEST(SeriesCsv, RoundTripIsExact) {
  io::Series s;
  s.t = {0.0, 0.1, 0.30000000000000004};
  s.value = {1.0, 1.0 / 3.0, -2.5e-17};
  const auto text = io::format_series_csv(s);
  EXPECT_EQ(text.substr(0, 8), "t,value\n");
  const auto back = io::parse_series_csv(text);
  EXPECT_EQ(back.t, s.t);
  EXPECT_EQ(back.value, s.value);
  EXPECT_FALSE(back.stderr_.has_value());
}

TEST(SeriesCsv, StderrColumn) {
  io::Series s = io::make_series({{0.0, 1.0}, {1.0, 0.5}});
  s.stderr_ = std::vector<double>{0.0, 0.01};
  const auto text = io::format_series_csv(s);
  EXPECT_EQ(text.substr(0, 15), "t,value,stderr\n");
  const auto back = io::parse_series_csv(text);
  ASSERT_TRUE(back.stderr_.has_value());
  EXPECT_EQ(*back.stderr_, *s.stderr_);
}

TEST(SeriesCsv, MalformedInput) {
  EXPECT_THROW(io::parse_series_csv(""), InvalidArgument);
  EXPECT_THROW(io::parse_series_csv("time,value\n0,1\n"), InvalidArgument);
  EXPECT_THROW(io::parse_series_csv("t,value\n0,abc\n"), InvalidArgument);
  EXPECT_THROW(io::parse_series_csv("t,value\n0,1,2\n"), InvalidArgument);
  EXPECT_THROW(io::parse_series_csv("t,value,stderr\n0,1\n"), InvalidArgument);
  EXPECT_EQ(io::parse_series_csv("t,value\r\n0,1\r\n\n").size(), 1u);
}

TEST(Files, AtomicWriteAndRead) {
  const auto dir = scratch_dir("atomic");
  const auto p = dir / "out.csv";
  io::write_file_atomic(p, "first\n");
  io::write_file_atomic(p, "second\n");
  EXPECT_EQ(io::read_file(p), "second\n");
  for (const auto& e : fs::directory_iterator(dir)) EXPECT_EQ(e.path().filename(), "out.csv");
  EXPECT_THROW(io::read_file(dir / "missing.csv"), InvalidArgument);
  EXPECT_THROW(io::read_series_csv(dir / "missing.csv"), InvalidArgument);
}

TEST(Archive, FullRoundTripPreservesStatistics) {
  const auto r = small_expansion();
  const auto doc = io::archive_to_json(r.archive, r.windows, io::SnapshotSelection::All);
  EXPECT_EQ(doc["format"], "empchaos-archive");
  EXPECT_EQ(doc["windows"].size(), 2u);
  const auto back = io::archive_from_json(nlohmann::json::parse(doc.dump()));
  const auto a = statistic_series(r.archive, 3, Statistic::MeanSquare);
  const auto b = statistic_series(back, 3, Statistic::MeanSquare);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_EQ(a[j].first, b[j].first);
    EXPECT_NEAR(a[j].second, b[j].second, 1e-15);
  }
}

TEST(Archive, EndpointSelectionKeepsWindowEnds) {
  const auto r = small_expansion();
  const auto doc = io::archive_to_json(r.archive, r.windows, io::SnapshotSelection::Endpoints);
  for (const auto& w : doc["windows"]) EXPECT_EQ(w["snapshots"].size(), 2u);
  const auto back = io::archive_from_json(doc);
  EXPECT_NEAR(mean_square_expectation(back, 0, 2.0), mean_square_expectation(r.archive, 0, 2.0), 1e-15);
}

TEST(Archive, RejectsUnknownFormat) {
  EXPECT_THROW(io::archive_from_json({{"format", "other"}, {"version", 1}}), InvalidArgument);
  nlohmann::json bad = {{"format", "empchaos-archive"}, {"version", 2}};
  EXPECT_THROW(io::archive_from_json(bad), InvalidArgument);
}

TEST(BasisTable, HeaderAndShape) {
  const auto r = small_expansion();
  const auto& b = r.archive.windows().front().basis;
  const auto csv = io::basis_table_csv(b);
  std::string header = "xi";
  for (std::size_t i = 0; i < b.size(); ++i) header += ",psi" + std::to_string(i + 1);
  EXPECT_EQ(csv.substr(0, header.size() + 1), header + "\n");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), b.node_count() + 1);
}
