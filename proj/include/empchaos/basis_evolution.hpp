#pragma once

#include <cstddef>
#include <vector>

#include "empchaos/empirical_chaos.hpp"
#include "empchaos/galerkin.hpp"
#include "empchaos/pde_core.hpp"
#include "empchaos/pod.hpp"

namespace empchaos {

/// Leading principal sub-block [first, first + size) of the spatial Gram
/// matrix, with its condition number.
struct SpatialBlock {
  std::size_t first = 0;
  std::size_t size = 0;
  double condition = 1.0;
};

/// Spatial Galerkin matrices for a frozen set of coefficient functions:
///   gram_ji   = int u^i u^j dx
///   advect_ji = int u^i_x u^j dx
/// The wave basis then obeys gram * Psi_t = xi * advect * Psi.
struct SpatialGalerkinPair {
  Matrix gram;
  Matrix advect;
  std::vector<SpatialBlock> blocks;
};

/// Periodic trapezoid integrals of the coefficient rows. Blocks are left
/// empty; see block_decompose.
SpatialGalerkinPair spatial_pair(const CoefficientField& field, const SpatialGrid& grid);

/// Greedy partition into contiguous diagonal blocks: each block grows from
/// its first index while its condition number stays below `condition_limit`.
/// A 1x1 block whose diagonal is below max_diag / condition_limit is
/// singular and raises SingularBlock.
std::vector<SpatialBlock> block_decompose(const Matrix& gram, double condition_limit);
void block_decompose(SpatialGalerkinPair& pair, double condition_limit);

/// Psi_B(xi_l, t0 + dt) = exp(xi_l * gram_B^{-1} advect_B * dt) Psi_B(xi_l, t0)
/// for every block B and node xi_l. The result keeps the rule; its window
/// starts dt later. Orthonormality is not preserved.
BasisSet evolve_basis(const BasisSet& basis, const SpatialGalerkinPair& pair, double dt);
BasisSet evolve_basis(const BasisSet& basis, const SpatialGalerkinPair& pair, double dt,
                      TimeWindow new_window);

/// Empirical chaos with basis evolution. Resample windows sample, truncate
/// and change basis; Evolve windows advance the previous basis in sub-steps
/// of at most options.evolve_substep, re-projecting after each; Hold windows
/// keep the basis fixed.
ExpansionResult run_algorithm_1(const PdeProblem& problem, const SpatialGrid& grid,
                                const ExpansionOptions& options);

}  // namespace empchaos
