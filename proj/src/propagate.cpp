#include "kvnlab/propagate.hpp"

#include <cmath>
#include <stdexcept>

namespace kvn {

namespace {

double poly_eval(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

void require_modes(const HybridState& s, std::size_t need, const char* what) {
    if (s.mode_count() != need) {
        throw std::invalid_argument(std::string(what) + ": state has wrong mode count");
    }
}

// Pointwise phase e^{-i t f(v1, v2, z1, z2)} over the two-mode layout.
template <typename F>
HybridState diag_phase2(const HybridState& in, RepTag r1, RepTag r2, bool touch2, double t,
                        F&& f) {
    HybridState s = to_representation(in, 0, r1);
    if (touch2) s = to_representation(s, 1, r2);
    const auto& v1 = (r1 == RepTag::Position) ? s.grid(0).positions() : s.grid(0).momenta();
    const auto& v2 = (s.rep(1) == RepTag::Position) ? s.grid(1).positions() : s.grid(1).momenta();
    const std::size_t n1 = s.grid(0).n(), n2 = s.grid(1).n();
    auto& a = s.amplitudes();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            for (int z1 = 1; z1 >= -1; z1 -= 2) {
                for (int z2 = 1; z2 >= -1; z2 -= 2) {
                    const double ev = f(v1[i], v2[j], z1, z2);
                    a[idx++] *= std::polar(1.0, -t * ev);
                }
            }
        }
    }
    return s;
}

// Single-mode variant.
template <typename F>
HybridState diag_phase1(const HybridState& in, RepTag r, double t, F&& f) {
    HybridState s = to_representation(in, 0, r);
    const auto& v = (r == RepTag::Position) ? s.grid(0).positions() : s.grid(0).momenta();
    auto& a = s.amplitudes();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < s.grid(0).n(); ++i) {
        for (int z1 = 1; z1 >= -1; z1 -= 2) {
            for (int z2 = 1; z2 >= -1; z2 -= 2) {
                a[idx++] *= std::polar(1.0, -t * f(v[i], z1, z2));
            }
        }
    }
    return s;
}

// e^{-i theta sigma_x} on qubit 1 with theta depending on the mode-1 position.
HybridState rot_x1(const HybridState& in, double coupling, double t) {
    HybridState s = to_representation(in, 0, RepTag::Position);
    const auto& x = s.grid(0).positions();
    auto& a = s.amplitudes();
    const std::size_t n1 = s.grid(0).n();
    const std::size_t n2 = (s.mode_count() == 2) ? s.grid(1).n() : 1;
    for (std::size_t i = 0; i < n1; ++i) {
        const double th = coupling * x[i] * t;
        const cplx c(std::cos(th), 0.0);
        const cplx ms(0.0, -std::sin(th));
        for (std::size_t j = 0; j < n2; ++j) {
            const std::size_t base = (i * n2 + j) * 4;
            for (std::size_t q2 = 0; q2 < 2; ++q2) {
                const cplx a0 = a[base + q2];        // q1 = 0
                const cplx a1 = a[base + 2 + q2];    // q1 = 1
                a[base + q2] = c * a0 + ms * a1;
                a[base + 2 + q2] = ms * a0 + c * a1;
            }
        }
    }
    return s;
}

// Cyclic roll of one mode axis: new[j] = old[j - sites mod n].
HybridState roll_axis(const HybridState& in, std::size_t mode, long sites) {
    HybridState s = in;
    const std::size_t n = s.grid(mode).n();
    const std::size_t stride = s.mode_stride(mode);
    const std::size_t total = s.size();
    const std::size_t outer = total / (n * stride);
    const long nn = static_cast<long>(n);
    const long sh = ((sites % nn) + nn) % nn;
    std::vector<cplx> scratch(n);
    auto& a = s.amplitudes();
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < stride; ++i) {
            const std::size_t base = o * n * stride + i;
            for (std::size_t j = 0; j < n; ++j) scratch[j] = a[base + j * stride];
            for (long j = 0; j < nn; ++j) {
                a[base + static_cast<std::size_t>(j) * stride] =
                    scratch[static_cast<std::size_t>((j - sh + nn) % nn)];
            }
        }
    }
    return s;
}

long commensurate_steps(double value, double unit, const char* what) {
    const double q = value / unit;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-9) {
        throw std::invalid_argument(std::string(what) + " must be an integer lattice multiple");
    }
    return static_cast<long>(r);
}

}  // namespace

HybridState apply_atom(const HybridState& s, const Atom& atom, double t) {
    using K = Atom::Kind;
    switch (atom.kind) {
        case K::FreePP: {
            require_modes(s, 2, "FreeKvN");
            const double m = atom.c;
            return diag_phase2(s, RepTag::Momentum, RepTag::Momentum, true, t,
                               [m](double p1, double p2, int, int) { return p1 * p2 / m; });
        }
        case K::PotentialXX: {
            require_modes(s, 2, "PotentialKvN");
            const auto& poly = atom.poly;
            return diag_phase2(s, RepTag::Position, RepTag::Position, true, t,
                               [&poly](double x1, double x2, int, int) {
                                   return poly_eval(poly, x1) * x2;
                               });
        }
        case K::CouplingZX1: {
            require_modes(s, 2, "QubitCouplingZ");
            const double c = atom.c;
            const double w1 = atom.on1 ? 1.0 : 0.0, w2 = atom.on2 ? 1.0 : 0.0;
            return diag_phase2(s, RepTag::Position, RepTag::Position, false, t,
                               [c, w1, w2](double x1, double, int z1, int z2) {
                                   return c * x1 * (w1 * z1 + w2 * z2);
                               });
        }
        case K::AlphaX1P2: {
            require_modes(s, 2, "EntanglerAlpha");
            const double c = atom.c;
            return diag_phase2(s, RepTag::Position, RepTag::Momentum, true, t,
                               [c](double x1, double p2, int, int) { return c * x1 * p2; });
        }
        case K::AlphaP1X2: {
            require_modes(s, 2, "EntanglerAlpha");
            const double c = atom.c;
            return diag_phase2(s, RepTag::Momentum, RepTag::Position, true, t,
                               [c](double p1, double x2, int, int) { return c * p1 * x2; });
        }
        case K::RotX1:
            return rot_x1(s, atom.c, t);
        case K::CouplingZP2: {
            require_modes(s, 2, "EntanglerP2");
            const double c = atom.c;
            const double w1 = atom.on1 ? 1.0 : 0.0, w2 = atom.on2 ? 1.0 : 0.0;
            HybridState out = to_representation(s, 1, RepTag::Momentum);
            const auto& p2v = out.grid(1).momenta();
            auto& a = out.amplitudes();
            const std::size_t n1 = out.grid(0).n(), n2 = out.grid(1).n();
            std::size_t idx = 0;
            for (std::size_t i = 0; i < n1; ++i) {
                for (std::size_t j = 0; j < n2; ++j) {
                    for (int z1 = 1; z1 >= -1; z1 -= 2) {
                        for (int z2 = 1; z2 >= -1; z2 -= 2) {
                            const double ev = c * p2v[j] * (w1 * z1 + w2 * z2);
                            a[idx++] *= std::polar(1.0, -t * ev);
                        }
                    }
                }
            }
            return out;
        }
        case K::QuantKinetic: {
            require_modes(s, 1, "QuantumKinetic");
            const double m = atom.c;
            return diag_phase1(s, RepTag::Momentum, t,
                               [m](double p, int, int) { return 0.5 * p * p / m; });
        }
        case K::QuantPotential: {
            require_modes(s, 1, "QuantumPotential");
            const auto& poly = atom.poly;
            return diag_phase1(s, RepTag::Position, t,
                               [&poly](double x, int, int) { return poly_eval(poly, x); });
        }
        case K::QuantCouplZ: {
            require_modes(s, 1, "QuantumQubitCoupling");
            const double c = atom.c;
            return diag_phase1(s, RepTag::Position, t,
                               [c](double x, int z1, int z2) { return c * x * (z1 + z2); });
        }
    }
    throw std::logic_error("apply_atom: bad kind");
}

HybridState apply_factor(const HybridState& s, const Factor& f, double t) {
    if (factor_mode_count(f) != s.mode_count()) {
        throw std::invalid_argument("apply_factor: factor/mode mismatch");
    }
    HybridState out = s;
    for (const auto& atom : atoms_of(f)) out = apply_atom(out, atom, t);
    return out;
}

HybridState factorized_propagator(const HybridState& s, double m, double lambda, double t) {
    require_modes(s, 2, "factorized_propagator");
    if (!(m > 0.0)) throw std::invalid_argument("factorized_propagator: mass must be > 0");
    // rightmost factor of the operator product acts first
    Atom third{Atom::Kind::CouplingZP2, lambda / m, {}, true, true};
    HybridState out = apply_atom(s, third, 0.5 * t * t);
    Atom second{Atom::Kind::CouplingZX1, lambda, {}, true, true};
    out = apply_atom(out, second, t);
    Atom first{Atom::Kind::FreePP, m, {}, true, true};
    return apply_atom(out, first, t);
}

HybridState strang_evolve(const HybridState& s, const HamiltonianSpec& h, double t,
                          std::size_t steps) {
    if (steps == 0) throw std::invalid_argument("strang_evolve: steps must be >= 1");
    const auto atoms = atoms_of(h);
    if (factor_mode_count(h.terms.front()) != s.mode_count()) {
        throw std::invalid_argument("strang_evolve: Hamiltonian/mode mismatch");
    }
    if (atoms.size() == 1) {
        return apply_atom(s, atoms.front(), t);
    }
    const double hstep = t / static_cast<double>(steps);
    HybridState out = s;
    for (std::size_t step = 0; step < steps; ++step) {
        for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
            out = apply_atom(out, atoms[i], 0.5 * hstep);
        }
        out = apply_atom(out, atoms.back(), hstep);
        for (std::size_t i = atoms.size() - 1; i-- > 0;) {
            out = apply_atom(out, atoms[i], 0.5 * hstep);
        }
    }
    return out;
}

HybridState galilean_boost(const HybridState& s, const BoostParams& b) {
    require_modes(s, 2, "galilean_boost");
    const long sx = commensurate_steps(b.a, s.grid(0).dx(), "galilean_boost: a");
    const long sp = commensurate_steps(b.m * b.v, s.grid(1).dp(), "galilean_boost: m*v");
    HybridState out = to_representation(s, 0, RepTag::Position);
    out = roll_axis(out, 0, sx);
    out = to_representation(out, 1, RepTag::Momentum);
    out = roll_axis(out, 1, -sp);
    return out;
}

double weyl_phase_defect(double a, double m, double v, const GridSpec& g, WeylPair pair) {
    const long sx = commensurate_steps(a, g.dx(), "weyl_phase_defect: a");
    const long sp = commensurate_steps(m * v, g.dp(), "weyl_phase_defect: m*v");
    (void)sp;

    // reference wavepacket resolved in both position and momentum
    const double sigma = g.length() / std::sqrt(2.0 * M_PI * static_cast<double>(g.n()));
    std::vector<cplx> psi(g.n());
    double n2 = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
        const double x = g.position(j);
        psi[j] = std::exp(-x * x / (4.0 * sigma * sigma));
        n2 += std::norm(psi[j]);
    }
    for (auto& c : psi) c /= std::sqrt(n2);

    const long nn = static_cast<long>(g.n());
    auto translate = [&](const std::vector<cplx>& f) {
        // e^{i a p}: support moves by +a
        std::vector<cplx> r(f.size());
        for (long j = 0; j < nn; ++j) {
            r[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>((j - sx + nn) % nn)];
        }
        return r;
    };
    auto boost_phase = [&](const std::vector<cplx>& f) {
        // e^{-i m v x}
        std::vector<cplx> r(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) {
            r[j] = f[j] * std::polar(1.0, -m * v * g.position(j));
        }
        return r;
    };

    if (pair == WeylPair::QuantumSingleMode) {
        const auto u = translate(boost_phase(psi));
        const auto w = boost_phase(translate(psi));
        cplx ip(0.0, 0.0);
        for (std::size_t j = 0; j < psi.size(); ++j) ip += std::conj(w[j]) * u[j];
        if (std::abs(std::abs(ip) - 1.0) > 1e-9) {
            throw std::runtime_error("weyl_phase_defect: orderings differ by more than a phase");
        }
        return std::arg(ip);
    }

    // Koopman pairing: translation acts on mode 1, boost phase on mode 2.
    // The two single-mode operations commute elementwise; the defect is the
    // phase between the two orderings of the same pair of commuting maps.
    InitialCondition ic;
    ic.x0 = 0.0;
    ic.p0 = 0.0;
    HybridState s0 = make_state(g, g, ic);
    BoostParams only_a{a, 0.0, 1.0};
    BoostParams only_v{0.0, v, m};
    const HybridState ab = galilean_boost(galilean_boost(s0, only_a), only_v);
    const HybridState ba = galilean_boost(galilean_boost(s0, only_v), only_a);
    const cplx ip = inner_product(ab, ba);
    if (std::abs(std::abs(ip) - 1.0) > 1e-9) {
        throw std::runtime_error("weyl_phase_defect: orderings differ by more than a phase");
    }
    return std::arg(ip);
}

}  // namespace kvn
