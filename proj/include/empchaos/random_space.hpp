#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "empchaos/types.hpp"

namespace empchaos {

/// Support of a uniformly distributed random variable.
class RandomInterval {
 public:
  RandomInterval(double lower, double upper);

  static RandomInterval symmetric_unit() { return {-1.0, 1.0}; }

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double length() const noexcept { return upper_ - lower_; }
  double density() const noexcept { return 1.0 / length(); }
  double midpoint() const noexcept { return 0.5 * (lower_ + upper_); }
  bool contains(double x) const noexcept { return x >= lower_ && x <= upper_; }

  // Affine map from [-1, 1] onto the interval.
  double from_reference(double s) const noexcept {
    return midpoint() + 0.5 * length() * s;
  }

  friend bool operator==(const RandomInterval&, const RandomInterval&) = default;

 private:
  double lower_;
  double upper_;
};

/// Discrete probability measure on a RandomInterval. Weights already carry
/// the density factor, so an expectation is a single dot product.
class QuadratureRule {
 public:
  QuadratureRule(RandomInterval interval, std::vector<double> nodes,
                 std::vector<double> weights);

  const RandomInterval& interval() const noexcept { return interval_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  Eigen::Map<const Vector> node_vector() const {
    return {nodes_.data(), static_cast<Eigen::Index>(nodes_.size())};
  }
  Eigen::Map<const Vector> weight_vector() const {
    return {weights_.data(), static_cast<Eigen::Index>(weights_.size())};
  }

  friend bool operator==(const QuadratureRule&, const QuadratureRule&) = default;

 private:
  RandomInterval interval_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Chebyshev–Gauss–Lobatto points (endpoints included), ascending.
std::vector<double> chebyshev_nodes(std::size_t count,
                                    const RandomInterval& interval);

/// Composite trapezoid rule on arbitrary ordered nodes spanning the interval.
QuadratureRule trapezoid_rule(std::span<const double> nodes,
                              const RandomInterval& interval);

/// Convenience: trapezoid rule on `count` Chebyshev–Lobatto nodes.
QuadratureRule chebyshev_trapezoid_rule(std::size_t count,
                                        const RandomInterval& interval);

/// Gauss–Legendre rule (Golub–Welsch). Exact for polynomials of degree
/// 2*count-1; used where Legendre orthonormality must hold to roundoff.
QuadratureRule gauss_legendre_rule(std::size_t count,
                                   const RandomInterval& interval);

double expectation(std::span<const double> values, const QuadratureRule& rule);
double expectation(const Vector& values, const QuadratureRule& rule);

/// Legendre polynomial of the given degree on [-1, 1], scaled to unit
/// second moment under the uniform density 1/2.
double legendre_normalized(std::size_t order, double x);

/// K x count table: column i holds L^i at every node (mapped to [-1, 1]).
Matrix legendre_table(std::size_t count, const QuadratureRule& rule);

}  // namespace empchaos
