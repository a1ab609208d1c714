#pragma once

#include <Eigen/Dense>

namespace empchaos {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace empchaos
