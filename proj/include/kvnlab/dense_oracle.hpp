// dense_oracle.hpp
// Independent verification path: materializes operators as dense matrices in
// the state's stored product basis and exponentiates Hamiltonians by Hermitian
// eigendecomposition. Capped at 4096 total dimensions.

#pragma once

#include <Eigen/Dense>

#include "kvnlab/hamiltonian.hpp"
#include "kvnlab/state.hpp"

namespace kvn {

inline constexpr std::size_t kDenseDimCap = 4096;

// Unitary centered DFT matrix (position -> momentum) built from the same
// transform used by to_representation.
Eigen::MatrixXcd transform_matrix(const GridSpec& g);

// x / p as matrices expressed in the given representation of one mode.
Eigen::MatrixXcd position_op(const GridSpec& g, RepTag rep);
Eigen::MatrixXcd momentum_op(const GridSpec& g, RepTag rep);

// Dense image of a symbolic expression on the product basis (modes in the
// given representations, then qubit 1, qubit 2). Single-mode systems use the
// mode-1 symbols; mode-2 symbols then throw.
Eigen::MatrixXcd expr_to_matrix(const OperatorExpr& e, const std::vector<GridSpec>& grids,
                                const std::vector<RepTag>& reps);

// Assembled Hermitian matrix of the Hamiltonian; throws if the assembly is
// not Hermitian to 1e-10 (internal consistency) or the dimension cap is hit.
Eigen::MatrixXcd dense_hamiltonian(const HamiltonianSpec& h, const std::vector<GridSpec>& grids,
                                   const std::vector<RepTag>& reps);

// e^{-iHt} via SelfAdjointEigenSolver; unitary to 1e-9.
Eigen::MatrixXcd dense_oracle_unitary(const HamiltonianSpec& h,
                                      const std::vector<GridSpec>& grids,
                                      const std::vector<RepTag>& reps, double t);

// Applies a dense operator expressed in `reps` to a state (aligning its
// representations first).
HybridState apply_dense(const Eigen::MatrixXcd& u, const HybridState& s,
                        const std::vector<RepTag>& reps);

// Flattened amplitude vector of s after aligning to `reps`.
Eigen::VectorXcd state_vector(const HybridState& s, const std::vector<RepTag>& reps);

}  // namespace kvn
