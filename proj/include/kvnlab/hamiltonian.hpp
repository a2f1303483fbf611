// hamiltonian.hpp
// Declarative Hamiltonians as lists of split-step factors. Each factor expands
// into one or two atoms; an atom is applied exactly in the representation
// where it is diagonal (or, for the sigma_x coupling, as a pointwise 2x2
// rotation at fixed x1).

#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "kvnlab/op_algebra.hpp"

namespace kvn {

// Two-mode Koopman factors ------------------------------------------------
struct FreeKvN {          // p1 p2 / m
    double m = 1.0;
};
struct HarmonicKvN {      // k x1 x2
    double k = 1.0;
};
struct PotentialKvN {     // V'(x1) x2, V' given by polynomial coefficients
    std::vector<double> vprime;  // c0 + c1 x + ... degree <= 4
};
struct QubitCouplingZ {   // lambda x1 (sz1 [+] sz2)
    double lambda = 1.0;
    bool on1 = true;
    bool on2 = true;
};
struct EntanglerAlpha {   // alpha (x1 p2 + p1 x2); two non-commuting atoms
    double alpha = 1.0;
};
struct EntanglerX1 {      // lambda1 sx1 x1
    double lambda1 = 1.0;
};
struct EntanglerP2 {      // lambda2 sz2 p2
    double lambda2 = 1.0;
};

// Single-mode quantum factors ---------------------------------------------
struct QuantumKinetic {   // p^2 / 2m
    double m = 1.0;
};
struct QuantumPotential {  // V(x) polynomial, degree <= 4
    std::vector<double> v;
};
struct QuantumQubitCoupling {  // lambda x (sz1 + sz2)
    double lambda = 1.0;
};

using Factor = std::variant<FreeKvN, HarmonicKvN, PotentialKvN, QubitCouplingZ,
                            EntanglerAlpha, EntanglerX1, EntanglerP2,
                            QuantumKinetic, QuantumPotential, QuantumQubitCoupling>;

struct HamiltonianSpec {
    std::vector<Factor> terms;
};

// Split-step atoms.
struct Atom {
    enum class Kind {
        FreePP,        // (1/m) p1 p2      diag in (M, M)
        PotentialXX,   // V'(x1) x2        diag in (P, P)
        CouplingZX1,   // c x1 (z1?on1 + z2?on2)   diag mode-1 P
        AlphaX1P2,     // c x1 p2          diag in (P, M)
        AlphaP1X2,     // c p1 x2          diag in (M, P)
        RotX1,         // c x1 sigma_x^1   pointwise rotation, mode-1 P
        CouplingZP2,   // c p2 (z1?on1 + z2?on2)   diag mode-2 M
        QuantKinetic,  // p^2/2m           diag M (single mode)
        QuantPotential,// V(x)             diag P (single mode)
        QuantCouplZ,   // c x (z1 + z2)    diag P (single mode)
    };
    Kind kind;
    double c = 0.0;             // coupling (or mass, for kinetic kinds)
    std::vector<double> poly;   // polynomial coefficients where applicable
    bool on1 = true;
    bool on2 = true;
};

// Number of continuous modes the factor needs (1 or 2).
std::size_t factor_mode_count(const Factor& f);

// Validates parameters (m > 0, polynomial degree <= 4).
void validate(const HamiltonianSpec& spec);

// Expands the factor list into its ordered atoms.
std::vector<Atom> atoms_of(const HamiltonianSpec& spec);
std::vector<Atom> atoms_of(const Factor& f);

// Symbolic image of a factor / spec (single-mode factors use the mode-1
// symbols x1, p1).
OperatorExpr factor_expr(const Factor& f);
OperatorExpr hamiltonian_expr(const HamiltonianSpec& spec);

}  // namespace kvn
