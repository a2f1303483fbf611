// state.hpp
// Hybrid states: 1-2 continuous modes (each tagged position/momentum) tensored
// with two qubits. Amplitudes are stored row-major as [mode1][mode2][q1][q2]
// (mode2 axis absent for single-mode systems). States are immutable values;
// all operations return new states.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "kvnlab/grid.hpp"

namespace kvn {

using cplx = std::complex<double>;

enum class RepTag { Position, Momentum };

enum class Profile { DiscreteDelta, Gaussian };

// Initial data for make_state. x0 must lie on the mode-1 position lattice and
// p0 on the mode-2 momentum lattice (exact to 1e-9). The Gaussian profile has
// amplitude exp(-(x-x0)^2/(2 sigma_x^2)) so the position marginal |psi|^2 has
// variance sigma_x^2/2; sigma_p2, when positive, likewise broadens the mode-2
// momentum amplitudes around p0 (zero keeps the exact delta). Qubit vectors
// must be normalized to 1e-12.
struct InitialCondition {
    double x0 = 0.0;
    double p0 = 0.0;
    Profile profile = Profile::DiscreteDelta;
    double sigma_x = 1.0;   // mode-1 position width (Gaussian profile)
    double sigma_p2 = 0.0;  // optional mode-2 momentum width (0 = delta)
    std::array<cplx, 2> qubit1{cplx(1.0, 0.0), cplx(0.0, 0.0)};
    std::array<cplx, 2> qubit2{cplx(1.0, 0.0), cplx(0.0, 0.0)};
};

class HybridState {
public:
    HybridState() = default;
    HybridState(std::vector<GridSpec> grids, std::vector<RepTag> reps,
                std::vector<cplx> amplitudes);

    std::size_t mode_count() const { return grids_.size(); }
    const GridSpec& grid(std::size_t mode) const { return grids_.at(mode); }
    RepTag rep(std::size_t mode) const { return reps_.at(mode); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    std::vector<cplx>& amplitudes() { return amps_; }
    std::size_t size() const { return amps_.size(); }

    // Stride of a mode axis in the flattened layout (qubit axes are the two
    // fastest, each of extent 2).
    std::size_t mode_stride(std::size_t mode) const;

    cplx& at(std::size_t m1, std::size_t q1, std::size_t q2);            // 1-mode
    cplx& at(std::size_t m1, std::size_t m2, std::size_t q1, std::size_t q2);  // 2-mode

private:
    std::vector<GridSpec> grids_;
    std::vector<RepTag> reps_;
    std::vector<cplx> amps_;
};

// Two-mode construction: mode 1 stored in Position, mode 2 in Momentum.
HybridState make_state(const GridSpec& g1, const GridSpec& g2, const InitialCondition& ic);

// Single-mode construction (quantum-mediator scenarios): position profile as
// above with plane-wave factor e^{i p0 x}; for a delta profile p0 must equal 0
// or lie on the momentum lattice.
HybridState make_state_single(const GridSpec& g, const InitialCondition& ic);

// Unitary centered Fourier change of basis along one mode. Returns the input
// unchanged when already in the target representation.
HybridState to_representation(const HybridState& s, std::size_t mode, RepTag target);

// Convenience: change both (or the single) mode tags at once.
HybridState with_reps(const HybridState& s, RepTag r1, RepTag r2);
HybridState with_reps(const HybridState& s, RepTag r1);

double norm(const HybridState& s);

// Auto-aligns representations of b to a's tags first.
cplx inner_product(const HybridState& a, const HybridState& b);

// |<a|b>|^2
double fidelity(const HybridState& a, const HybridState& b);

void normalize(HybridState& s);

}  // namespace kvn
