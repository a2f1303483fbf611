// observe.hpp
// Observables and entanglement quantification: operator expectations via exact
// spectral application, torus-aware variances, reduced qubit-pair density
// matrices, negativity, von Neumann entropies, and conservation-law audits.

#pragma once

#include <Eigen/Dense>

#include "kvnlab/hamiltonian.hpp"
#include "kvnlab/op_algebra.hpp"
#include "kvnlab/state.hpp"

namespace kvn {

// Applies a normal-ordered monomial (p powers first, then x powers, per mode,
// plus Pauli factors) to the state. Exact spectral application.
HybridState apply_monomial(const HybridState& s, const Monomial& m);

// Applies a full expression (sum of monomials).
HybridState apply_expr(const HybridState& s, const OperatorExpr& e);

// <s|obs|s> for Hermitian obs; throws on non-Hermitian input or mode-2
// symbols on single-mode states. Imaginary part must be < 1e-9.
double expectation(const HybridState& s, const OperatorExpr& obs);

// <obs^2> - <obs>^2. For a bare canonical variable (x_i or p_i) the moments
// are computed from the marginal after recentering its support on the torus;
// general observables use the plain expectation route.
double variance(const HybridState& s, const OperatorExpr& obs);

// Probability marginal of one mode in the requested representation.
std::vector<double> marginal(const HybridState& s, std::size_t mode, RepTag rep);

// First moment of a mode marginal after recentering around its peak
// (covering-interval mean; exact when the support does not wrap).
double torus_mean(const HybridState& s, std::size_t mode, RepTag rep);

struct QubitPairDensity {
    Eigen::Matrix4cd rho;  // basis order |q1 q2> in {00,01,10,11}
};

// Partial trace over the continuous modes. Clips eigenvalues below -1e-10
// after asserting the bound, renormalizes trace to 1.
QubitPairDensity reduce_to_qubits(const HybridState& s);

// N(rho) = (||rho^{T2}||_1 - 1)/2; zero iff separable for two qubits.
double negativity(const QubitPairDensity& d);

double purity(const QubitPairDensity& d);

enum class EntropyCut { Qubit1, Qubit2, QubitPair };

// von Neumann entropy in bits of the reduced state across the cut.
double entanglement_entropy(const HybridState& s, EntropyCut cut);

// Single-qubit Bloch vector (sx, sy, sz) of the reduced qubit.
std::array<double, 3> bloch_vector(const QubitPairDensity& d, int which);

struct ConservationAudit {
    OperatorExpr quantity;
    std::vector<double> times;
    std::vector<double> series;
    double max_drift = 0.0;
};

// Evolves s0 over t_grid and records <C>(t). Uses the exact factorized path
// when the Hamiltonian is exactly FreeKvN + QubitCouplingZ(both qubits), else
// Strang with the given step count per unit time.
ConservationAudit conservation_drift(const HamiltonianSpec& h, const OperatorExpr& c,
                                     const HybridState& s0, const std::vector<double>& t_grid,
                                     std::size_t strang_steps = 256);

}  // namespace kvn
