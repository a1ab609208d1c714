#include "empchaos/pod.hpp"

#include <atomic>
#include <ostream>

#include <Eigen/SVD>

#include "empchaos/errors.hpp"

namespace empchaos {

namespace {
std::uint64_t next_basis_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}
}  // namespace

BasisSet::BasisSet(Matrix values, std::shared_ptr<const QuadratureRule> rule,
                   TimeWindow window, std::vector<double> singular_values)
    : values_(std::move(values)),
      rule_(std::move(rule)),
      window_(std::move(window)),
      singular_values_(std::move(singular_values)),
      id_(next_basis_id()) {
  if (!rule_) throw InvalidArgument("basis set needs a quadrature rule");
  if (values_.cols() < 1) throw InvalidArgument("basis set needs at least one function");
  if (static_cast<std::size_t>(values_.rows()) != rule_->size()) {
    throw InvalidArgument("basis values do not match the quadrature node count");
  }
  if (!values_.allFinite()) throw InvalidArgument("basis values must be finite");
}

bool BasisSet::shares_rule_with(const BasisSet& other) const {
  return rule_ == other.rule_ || *rule_ == *other.rule_;
}

BasisSet BasisSet::with_values(Matrix values, TimeWindow window) const {
  return BasisSet(std::move(values), rule_, std::move(window), singular_values_);
}

BasisSet BasisSet::with_window(TimeWindow window) const {
  return BasisSet(values_, rule_, std::move(window), singular_values_);
}

TrajectoryMatrix assemble_trajectory_matrix(const std::vector<std::vector<Vector>>& solutions) {
  if (solutions.empty() || solutions.front().empty()) {
    throw InvalidArgument("assemble_trajectory_matrix: no solutions");
  }
  const std::size_t time_count = solutions.front().size();
  const auto grid_points = static_cast<std::size_t>(solutions.front().front().size());
  for (const auto& s : solutions) {
    if (s.size() != time_count) {
      throw InvalidArgument("assemble_trajectory_matrix: ragged output-time counts");
    }
    for (const auto& state : s) {
      if (static_cast<std::size_t>(state.size()) != grid_points) {
        throw InvalidArgument("assemble_trajectory_matrix: ragged grid sizes");
      }
    }
  }
  TrajectoryMatrix t;
  t.grid_points = grid_points;
  t.time_count = time_count;
  t.entries.resize(static_cast<Eigen::Index>(grid_points * time_count),
                   static_cast<Eigen::Index>(solutions.size()));
  for (std::size_t l = 0; l < solutions.size(); ++l) {
    auto col = t.entries.col(static_cast<Eigen::Index>(l));
    for (std::size_t j = 0; j < time_count; ++j) {
      const Vector& state = solutions[l][j];
      for (std::size_t i = 0; i < grid_points; ++i) {
        col(static_cast<Eigen::Index>(i * time_count + j)) = state(static_cast<Eigen::Index>(i));
      }
    }
  }
  if (!t.entries.allFinite()) {
    throw InvalidArgument("assemble_trajectory_matrix: non-finite entries");
  }
  return t;
}

std::size_t retained_count(const std::vector<double>& singular_values,
                           const PodOptions& options) {
  if (singular_values.empty() || !(singular_values.front() > 0.0)) return 1;
  const double lead = singular_values.front();
  std::size_t count = 0;
  for (double s : singular_values) {
    if (s / lead >= options.threshold) ++count;
  }
  count = std::max<std::size_t>(count, 1);
  if (options.cap) count = std::min(count, std::max<std::size_t>(*options.cap, 1));
  return count;
}

BasisSet truncate_pod(const TrajectoryMatrix& trajectories, const PodOptions& options,
                      std::shared_ptr<const QuadratureRule> rule, TimeWindow window) {
  if (!(options.threshold > 0.0 && options.threshold < 1.0)) {
    throw InvalidArgument("truncate_pod: threshold must lie in (0, 1)");
  }
  const Matrix& t = trajectories.entries;
  if (t.size() == 0 || t.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateInput("truncate_pod: trajectory matrix is identically zero");
  }
  // T = QR leaves the singular values and right singular vectors unchanged,
  // and the SVD of the small R is much cheaper for tall T.
  Matrix reduced;
  if (t.rows() > 2 * t.cols()) {
    Eigen::HouseholderQR<Matrix> qr(t);
    reduced = qr.matrixQR().topRows(t.cols()).triangularView<Eigen::Upper>();
  }
  Eigen::BDCSVD<Matrix> svd(reduced.size() ? reduced : t, Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  std::vector<double> values(sigma.data(), sigma.data() + sigma.size());
  const std::size_t keep = retained_count(values, options);
  Matrix basis = svd.matrixV().leftCols(static_cast<Eigen::Index>(keep));
  return BasisSet(std::move(basis), std::move(rule), std::move(window), std::move(values));
}

double projection_residual(const TrajectoryMatrix& trajectories, const BasisSet& basis) {
  const Matrix& t = trajectories.entries;
  const Matrix& v = basis.values();
  if (t.cols() != v.rows()) {
    throw InvalidArgument("projection_residual: node counts differ");
  }
  // Orthonormalize first so the projector is exact even for non-orthonormal
  // input columns.
  Eigen::HouseholderQR<Matrix> qr(v);
  const Matrix q = qr.householderQ() * Matrix::Identity(v.rows(), v.cols());
  const Matrix residual = t - (t * q) * q.transpose();
  return residual.norm();
}

void write_singular_values_csv(std::ostream& out, const std::vector<double>& singular_values) {
  out << "index,sigma,sigma_scaled\n";
  const double lead = singular_values.empty() ? 1.0 : singular_values.front();
  out.precision(17);
  for (std::size_t i = 0; i < singular_values.size(); ++i) {
    out << (i + 1) << ',' << singular_values[i] << ','
        << (lead > 0.0 ? singular_values[i] / lead : 0.0) << '\n';
  }
}

}  // namespace empchaos
