#pragma once

#include "empchaos/types.hpp"

namespace empchaos {

/// exp(A) by scaling and squaring with diagonal Pade approximants of degree
/// 3, 5, 7, 9 or 13, chosen from the 1-norm of A (Higham, SIAM J. Matrix
/// Anal. Appl. 26 (2005)). Throws IntegrationDiverged on overflow.
Matrix matrix_exponential(const Matrix& a);

}  // namespace empchaos
