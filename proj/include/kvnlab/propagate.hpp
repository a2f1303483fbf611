// propagate.hpp
// Time evolution: exact split-step application of diagonal factors, the exact
// three-factor propagator for the Koopman qubit coupling, symmetric (Strang)
// composition for non-commuting Hamiltonians, Galilean boosts, and the
// translation/boost commutation probe.

#pragma once

#include "kvnlab/hamiltonian.hpp"
#include "kvnlab/state.hpp"

namespace kvn {

// Applies e^{-i * atom * t} exactly (diagonal phase or pointwise rotation).
HybridState apply_atom(const HybridState& s, const Atom& atom, double t);

// Applies one declared factor exactly; EntanglerAlpha applies its two atoms
// in sequence (each exact, jointly a first-order split).
HybridState apply_factor(const HybridState& s, const Factor& f, double t);

// Exact propagator for H = p1 p2 / m + lambda x1 (sz1 + sz2):
//   e^{-iHt} = e^{-i p1 p2 t/m} e^{-i lambda x1 Sz t} e^{-i lambda p2 Sz t^2/(2m)}
// applied right-to-left. The quadratic-in-t exponent of the last factor is the
// one the central-commutator factorization yields; see verify-algebra.
HybridState factorized_propagator(const HybridState& s, double m, double lambda, double t);

// Symmetric second-order composition over the Hamiltonian's atom list.
HybridState strang_evolve(const HybridState& s, const HamiltonianSpec& h, double t,
                          std::size_t steps);

struct BoostParams {
    double a = 0.0;  // spatial displacement, integer multiple of dx1
    double v = 0.0;  // velocity; m*v must be an integer multiple of dp2
    double m = 1.0;
};

// <x1> -> <x1> + a, <p2> -> <p2> - m v, via commuting exact lattice shifts.
HybridState galilean_boost(const HybridState& s, const BoostParams& b);

enum class WeylPair {
    QuantumSingleMode,  // e^{i a p} vs e^{-i m v x} on one mode: defect a*m*v
    KoopmanHidden,      // e^{i a p1} vs e^{-i m v x2}: defect 0
};

// Global phase angle between the two orderings of the translation and boost
// unitaries on a reference state; throws if the shifts are off-lattice or the
// result is not a pure global phase.
double weyl_phase_defect(double a, double m, double v, const GridSpec& g, WeylPair pair);

}  // namespace kvn
