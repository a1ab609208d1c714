#include "empchaos/random_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "empchaos/errors.hpp"

namespace empchaos {

RandomInterval::RandomInterval(double lower, double upper)
    : lower_(lower), upper_(upper) {
  if (!(std::isfinite(lower) && std::isfinite(upper)) || !(lower < upper)) {
    throw InvalidArgument("random interval requires finite lower < upper");
  }
}

QuadratureRule::QuadratureRule(RandomInterval interval,
                               std::vector<double> nodes,
                               std::vector<double> weights)
    : interval_(interval), nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.empty() || nodes_.size() != weights_.size()) {
    throw InvalidArgument("quadrature rule needs equally many nodes and weights");
  }
  double total = 0.0;
  for (std::size_t l = 0; l < nodes_.size(); ++l) {
    if (!interval_.contains(nodes_[l])) {
      throw InvalidArgument("quadrature node outside the support");
    }
    if (l > 0 && !(nodes_[l] > nodes_[l - 1])) {
      throw InvalidArgument("quadrature nodes must be strictly increasing");
    }
    if (!(weights_[l] >= 0.0)) {
      throw InvalidArgument("quadrature weights must be nonnegative");
    }
    total += weights_[l];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("quadrature weights must sum to one, got " +
                          std::to_string(total));
  }
}

std::vector<double> chebyshev_nodes(std::size_t count,
                                    const RandomInterval& interval) {
  if (count < 2) {
    throw InvalidArgument("chebyshev_nodes needs at least two points");
  }
  const std::size_t n = count - 1;
  std::vector<double> nodes(count);
  for (std::size_t k = 0; k < count; ++k) {
    // Ascending order: s_k = -cos(pi k / n). Pair symmetric entries so the
    // set is symmetric to roundoff.
    double s;
    if (2 * k == n) {
      s = 0.0;
    } else if (2 * k < n) {
      s = -std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    } else {
      s = std::cos(std::numbers::pi * static_cast<double>(n - k) / static_cast<double>(n));
    }
    nodes[k] = interval.from_reference(s);
  }
  nodes.front() = interval.lower();
  nodes.back() = interval.upper();
  return nodes;
}

QuadratureRule trapezoid_rule(std::span<const double> nodes,
                              const RandomInterval& interval) {
  if (nodes.size() < 2) {
    throw InvalidArgument("trapezoid rule needs at least two nodes");
  }
  for (std::size_t l = 1; l < nodes.size(); ++l) {
    if (!(nodes[l] > nodes[l - 1])) {
      throw InvalidArgument("trapezoid nodes must be strictly increasing");
    }
  }
  if (nodes.front() != interval.lower() || nodes.back() != interval.upper()) {
    throw InvalidArgument("trapezoid nodes must include both interval endpoints");
  }
  const double density = interval.density();
  std::vector<double> weights(nodes.size(), 0.0);
  for (std::size_t l = 0; l + 1 < nodes.size(); ++l) {
    const double half = 0.5 * (nodes[l + 1] - nodes[l]) * density;
    weights[l] += half;
    weights[l + 1] += half;
  }
  // The panel widths telescope to the interval length; remove the roundoff.
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return QuadratureRule(interval, {nodes.begin(), nodes.end()}, std::move(weights));
}

QuadratureRule chebyshev_trapezoid_rule(std::size_t count,
                                        const RandomInterval& interval) {
  const auto nodes = chebyshev_nodes(count, interval);
  return trapezoid_rule(nodes, interval);
}

QuadratureRule gauss_legendre_rule(std::size_t count,
                                   const RandomInterval& interval) {
  if (count < 1) {
    throw InvalidArgument("gauss_legendre_rule needs at least one point");
  }
  const auto n = static_cast<Eigen::Index>(count);
  Matrix jacobi = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double beta = kk / std::sqrt(4.0 * kk * kk - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  std::vector<double> nodes(count);
  std::vector<double> weights(count);
  double total = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = std::clamp(eig.eigenvalues()(k), -1.0, 1.0);
    nodes[k] = interval.from_reference(s);
    // Weights for the probability measure: first eigenvector component squared.
    weights[k] = eig.eigenvectors()(0, k) * eig.eigenvectors()(0, k);
    total += weights[k];
  }
  for (double& w : weights) w /= total;
  return QuadratureRule(interval, std::move(nodes), std::move(weights));
}

double expectation(std::span<const double> values, const QuadratureRule& rule) {
  if (values.size() != rule.size()) {
    throw InvalidArgument("expectation: value count does not match node count");
  }
  const auto w = rule.weights();
  double sum = 0.0;
  for (std::size_t l = 0; l < values.size(); ++l) sum += w[l] * values[l];
  return sum;
}

double expectation(const Vector& values, const QuadratureRule& rule) {
  return expectation(std::span<const double>(values.data(), values.size()), rule);
}

double legendre_normalized(std::size_t order, double x) {
  if (order == 0) return 1.0;
  // Standard three-term recurrence for P_n, then scale by sqrt(2n+1).
  double p_prev = 1.0;
  double p = x;
  for (std::size_t k = 1; k < order; ++k) {
    const double kk = static_cast<double>(k);
    const double p_next = ((2.0 * kk + 1.0) * x * p - kk * p_prev) / (kk + 1.0);
    p_prev = p;
    p = p_next;
  }
  return std::sqrt(2.0 * static_cast<double>(order) + 1.0) * p;
}

Matrix legendre_table(std::size_t count, const QuadratureRule& rule) {
  const auto nodes = rule.nodes();
  const auto& iv = rule.interval();
  Matrix table(static_cast<Eigen::Index>(nodes.size()),
               static_cast<Eigen::Index>(count));
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    const double s = std::clamp((nodes[l] - iv.midpoint()) / (0.5 * iv.length()), -1.0, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
      table(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i)) =
          legendre_normalized(i, s);
    }
  }
  return table;
}

}  // namespace empchaos
