#include "kvnlab/state.hpp"

#include <cmath>
#include <stdexcept>

#include "kvnlab/fft.hpp"

namespace kvn {

namespace {

constexpr double kQubitNormTol = 1e-12;
constexpr double kLatticeTol = 1e-9;

void check_qubit(const std::array<cplx, 2>& q, const char* name) {
    const double n2 = std::norm(q[0]) + std::norm(q[1]);
    if (std::abs(n2 - 1.0) > kQubitNormTol) {
        throw std::invalid_argument(std::string("make_state: ") + name +
                                    " is not normalized");
    }
}

// Degenerate widths: narrower than half a lattice cell (unresolvable) or as
// wide as half the torus (wraps onto itself).
void check_gaussian_width(double sigma, double cell, double span, const char* what) {
    if (!(sigma > 0.5 * cell) || !(sigma < 0.5 * span)) {
        throw std::invalid_argument(std::string("make_state: degenerate Gaussian width for ") +
                                    what);
    }
}

}  // namespace

HybridState::HybridState(std::vector<GridSpec> grids, std::vector<RepTag> reps,
                         std::vector<cplx> amplitudes)
    : grids_(std::move(grids)), reps_(std::move(reps)), amps_(std::move(amplitudes)) {
    if (grids_.empty() || grids_.size() > 2 || grids_.size() != reps_.size()) {
        throw std::invalid_argument("HybridState: need 1 or 2 modes with matching tags");
    }
    std::size_t expect = 4;
    for (const auto& g : grids_) expect *= g.n();
    if (amps_.size() != expect) {
        throw std::invalid_argument("HybridState: amplitude count does not match grids");
    }
}

std::size_t HybridState::mode_stride(std::size_t mode) const {
    if (mode >= grids_.size()) throw std::out_of_range("mode index");
    std::size_t stride = 4;  // two qubit axes
    for (std::size_t m = grids_.size(); m-- > mode + 1;) stride *= grids_[m].n();
    return stride;
}

cplx& HybridState::at(std::size_t m1, std::size_t q1, std::size_t q2) {
    return amps_[(m1 * 2 + q1) * 2 + q2];
}

cplx& HybridState::at(std::size_t m1, std::size_t m2, std::size_t q1, std::size_t q2) {
    return amps_[((m1 * grids_[1].n() + m2) * 2 + q1) * 2 + q2];
}

HybridState make_state(const GridSpec& g1, const GridSpec& g2, const InitialCondition& ic) {
    check_qubit(ic.qubit1, "qubit1");
    check_qubit(ic.qubit2, "qubit2");

    const std::size_t i0 = g1.position_index(ic.x0, kLatticeTol);
    const std::size_t j0 = g2.momentum_index(ic.p0, kLatticeTol);

    std::vector<double> f(g1.n(), 0.0);
    if (ic.profile == Profile::DiscreteDelta) {
        f[i0] = 1.0;
    } else {
        check_gaussian_width(ic.sigma_x, g1.dx(), g1.length(), "mode-1 position");
        double n2 = 0.0;
        for (std::size_t j = 0; j < g1.n(); ++j) {
            const double d = g1.position(j) - ic.x0;
            f[j] = std::exp(-d * d / (2.0 * ic.sigma_x * ic.sigma_x));
            n2 += f[j] * f[j];
        }
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& v : f) v *= inv;
    }

    std::vector<double> h(g2.n(), 0.0);
    if (ic.profile == Profile::DiscreteDelta || ic.sigma_p2 <= 0.0) {
        h[j0] = 1.0;
    } else {
        const double span = g2.dp() * static_cast<double>(g2.n());
        check_gaussian_width(ic.sigma_p2, g2.dp(), span, "mode-2 momentum");
        double n2 = 0.0;
        for (std::size_t k = 0; k < g2.n(); ++k) {
            double d = g2.momentum(k) - ic.p0;
            // nearest periodic image on the momentum torus
            d -= span * std::round(d / span);
            h[k] = std::exp(-d * d / (2.0 * ic.sigma_p2 * ic.sigma_p2));
            n2 += h[k] * h[k];
        }
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& v : h) v *= inv;
    }

    std::vector<cplx> amps(g1.n() * g2.n() * 4, cplx(0.0, 0.0));
    HybridState s({g1, g2}, {RepTag::Position, RepTag::Momentum}, std::move(amps));
    for (std::size_t i = 0; i < g1.n(); ++i) {
        if (f[i] == 0.0) continue;
        for (std::size_t j = 0; j < g2.n(); ++j) {
            if (h[j] == 0.0) continue;
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) {
                    s.at(i, j, a, b) = f[i] * h[j] * ic.qubit1[a] * ic.qubit2[b];
                }
            }
        }
    }
    return s;
}

HybridState make_state_single(const GridSpec& g, const InitialCondition& ic) {
    check_qubit(ic.qubit1, "qubit1");
    check_qubit(ic.qubit2, "qubit2");

    std::vector<cplx> f(g.n(), cplx(0.0, 0.0));
    if (ic.profile == Profile::DiscreteDelta) {
        const std::size_t i0 = g.position_index(ic.x0, kLatticeTol);
        if (ic.p0 != 0.0) g.momentum_index(ic.p0, kLatticeTol);  // lattice check only
        f[i0] = cplx(1.0, 0.0);
    } else {
        check_gaussian_width(ic.sigma_x, g.dx(), g.length(), "position");
        double n2 = 0.0;
        for (std::size_t j = 0; j < g.n(); ++j) {
            const double d = g.position(j) - ic.x0;
            const double mag = std::exp(-d * d / (2.0 * ic.sigma_x * ic.sigma_x));
            f[j] = std::polar(mag, ic.p0 * g.position(j));
            n2 += mag * mag;
        }
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& v : f) v *= inv;
    }

    std::vector<cplx> amps(g.n() * 4, cplx(0.0, 0.0));
    HybridState s({g}, {RepTag::Position}, std::move(amps));
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b) {
                s.at(i, a, b) = f[i] * ic.qubit1[a] * ic.qubit2[b];
            }
        }
    }
    return s;
}

HybridState to_representation(const HybridState& s, std::size_t mode, RepTag target) {
    if (mode >= s.mode_count()) {
        throw std::invalid_argument("to_representation: invalid mode index");
    }
    if (s.rep(mode) == target) return s;
    HybridState out = s;
    fft::transform_axis(out.amplitudes(), out.size(), out.grid(mode).n(),
                        out.mode_stride(mode), target == RepTag::Momentum);
    std::vector<RepTag> reps;
    for (std::size_t m = 0; m < s.mode_count(); ++m) reps.push_back(s.rep(m));
    reps[mode] = target;
    std::vector<GridSpec> grids;
    for (std::size_t m = 0; m < s.mode_count(); ++m) grids.push_back(s.grid(m));
    return HybridState(std::move(grids), std::move(reps), std::move(out.amplitudes()));
}

HybridState with_reps(const HybridState& s, RepTag r1, RepTag r2) {
    return to_representation(to_representation(s, 0, r1), 1, r2);
}

HybridState with_reps(const HybridState& s, RepTag r1) {
    return to_representation(s, 0, r1);
}

double norm(const HybridState& s) {
    double n2 = 0.0;
    for (const auto& a : s.amplitudes()) n2 += std::norm(a);
    return std::sqrt(n2);
}

cplx inner_product(const HybridState& a, const HybridState& b) {
    if (a.mode_count() != b.mode_count() || a.size() != b.size()) {
        throw std::invalid_argument("inner_product: shape mismatch");
    }
    for (std::size_t m = 0; m < a.mode_count(); ++m) {
        if (!(a.grid(m) == b.grid(m))) {
            throw std::invalid_argument("inner_product: grid mismatch");
        }
    }
    HybridState bb = b;
    for (std::size_t m = 0; m < a.mode_count(); ++m) {
        bb = to_representation(bb, m, a.rep(m));
    }
    cplx acc(0.0, 0.0);
    const auto& av = a.amplitudes();
    const auto& bv = bb.amplitudes();
    for (std::size_t i = 0; i < av.size(); ++i) acc += std::conj(av[i]) * bv[i];
    return acc;
}

double fidelity(const HybridState& a, const HybridState& b) {
    return std::norm(inner_product(a, b));
}

void normalize(HybridState& s) {
    const double n = norm(s);
    if (n <= 0.0) throw std::runtime_error("normalize: zero state");
    for (auto& a : s.amplitudes()) a /= n;
}

}  // namespace kvn
