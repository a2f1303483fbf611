#include "kvnlab/observe.hpp"

#include <cmath>
#include <stdexcept>

#include "kvnlab/propagate.hpp"

namespace kvn {

namespace {

// Multiplies amplitudes along one mode axis by lattice-value^k in the given
// representation.
HybridState axis_power(const HybridState& in, std::size_t mode, RepTag rep, unsigned k) {
    if (k == 0) return in;
    HybridState s = to_representation(in, mode, rep);
    const auto& vals = (rep == RepTag::Position) ? s.grid(mode).positions()
                                                 : s.grid(mode).momenta();
    const std::size_t n = s.grid(mode).n();
    const std::size_t stride = s.mode_stride(mode);
    const std::size_t total = s.size();
    const std::size_t outer = total / (n * stride);
    auto& a = s.amplitudes();
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < stride; ++i) {
            const std::size_t base = o * n * stride + i;
            for (std::size_t j = 0; j < n; ++j) {
                double f = 1.0;
                for (unsigned q = 0; q < k; ++q) f *= vals[j];
                a[base + j * stride] *= f;
            }
        }
    }
    return s;
}

HybridState apply_pauli(const HybridState& in, int which, Pauli p) {
    if (p == Pauli::I) return in;
    HybridState s = in;
    const auto m = pauli_matrix(p);
    auto& a = s.amplitudes();
    const std::size_t pairs = s.size() / 4;
    for (std::size_t g = 0; g < pairs; ++g) {
        const std::size_t base = g * 4;
        if (which == 1) {
            for (std::size_t q2 = 0; q2 < 2; ++q2) {
                const cplx a0 = a[base + q2], a1 = a[base + 2 + q2];
                a[base + q2] = m[0][0] * a0 + m[0][1] * a1;
                a[base + 2 + q2] = m[1][0] * a0 + m[1][1] * a1;
            }
        } else {
            for (std::size_t q1 = 0; q1 < 2; ++q1) {
                const cplx a0 = a[base + 2 * q1], a1 = a[base + 2 * q1 + 1];
                a[base + 2 * q1] = m[0][0] * a0 + m[0][1] * a1;
                a[base + 2 * q1 + 1] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
    return s;
}

bool is_bare_variable(const OperatorExpr& e, std::size_t* mode, RepTag* rep) {
    if (e.terms().size() != 1) return false;
    const auto& [m, c] = *e.terms().begin();
    if (c != cplx(1.0, 0.0)) return false;
    if (m.q1 != Pauli::I || m.q2 != Pauli::I) return false;
    unsigned total = 0;
    int which = -1;
    for (int v = 0; v < 4; ++v) {
        total += m.pw[v];
        if (m.pw[v] == 1) which = v;
    }
    if (total != 1 || which < 0) return false;
    *mode = (which < 2) ? 0 : 1;
    *rep = (which % 2 == 0) ? RepTag::Position : RepTag::Momentum;
    return true;
}

}  // namespace

HybridState apply_monomial(const HybridState& s, const Monomial& m) {
    if (s.mode_count() == 1 && (m.pw[2] != 0 || m.pw[3] != 0)) {
        throw std::invalid_argument("apply_monomial: mode-2 symbol on single-mode state");
    }
    HybridState out = s;
    // normal order x^a p^b acts as: p powers first, then x powers
    out = axis_power(out, 0, RepTag::Momentum, m.pw[1]);
    out = axis_power(out, 0, RepTag::Position, m.pw[0]);
    if (s.mode_count() == 2) {
        out = axis_power(out, 1, RepTag::Momentum, m.pw[3]);
        out = axis_power(out, 1, RepTag::Position, m.pw[2]);
    }
    out = apply_pauli(out, 1, m.q1);
    out = apply_pauli(out, 2, m.q2);
    return out;
}

HybridState apply_expr(const HybridState& s, const OperatorExpr& e) {
    HybridState acc = s;
    bool first = true;
    for (const auto& [m, c] : e.terms()) {
        HybridState term = apply_monomial(s, m);
        for (auto& a : term.amplitudes()) a *= c;
        if (first) {
            for (std::size_t mo = 0; mo < s.mode_count(); ++mo) {
                term = to_representation(term, mo, s.rep(mo));
            }
            acc = term;
            first = false;
        } else {
            for (std::size_t mo = 0; mo < s.mode_count(); ++mo) {
                term = to_representation(term, mo, acc.rep(mo));
            }
            for (std::size_t i = 0; i < acc.size(); ++i) {
                acc.amplitudes()[i] += term.amplitudes()[i];
            }
        }
    }
    if (first) {
        // zero expression
        acc = s;
        for (auto& a : acc.amplitudes()) a = cplx(0.0, 0.0);
    }
    return acc;
}

double expectation(const HybridState& s, const OperatorExpr& obs) {
    if (!is_hermitian(obs)) {
        throw std::invalid_argument("expectation: observable is not Hermitian");
    }
    const cplx val = inner_product(s, apply_expr(s, obs));
    if (std::abs(val.imag()) > 1e-9) {
        throw std::runtime_error("expectation: imaginary part exceeds 1e-9");
    }
    return val.real();
}

std::vector<double> marginal(const HybridState& s, std::size_t mode, RepTag rep) {
    HybridState a = to_representation(s, mode, rep);
    const std::size_t n = a.grid(mode).n();
    const std::size_t stride = a.mode_stride(mode);
    const std::size_t outer = a.size() / (n * stride);
    std::vector<double> p(n, 0.0);
    const auto& amps = a.amplitudes();
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < stride; ++i) {
            const std::size_t base = o * n * stride + i;
            for (std::size_t j = 0; j < n; ++j) {
                p[j] += std::norm(amps[base + j * stride]);
            }
        }
    }
    return p;
}

namespace {

// Recentered moments of a periodic marginal: displacements are wrapped into
// (-span/2, span/2] around the peak cell before summing.
void recentered_moments(const std::vector<double>& prob, const std::vector<double>& vals,
                        double span, double* mean, double* var) {
    std::size_t peak = 0;
    for (std::size_t j = 1; j < prob.size(); ++j) {
        if (prob[j] > prob[peak]) peak = j;
    }
    const double v0 = vals[peak];
    double m1 = 0.0, m2 = 0.0, w = 0.0;
    for (std::size_t j = 0; j < prob.size(); ++j) {
        double d = vals[j] - v0;
        d -= span * std::round(d / span);
        m1 += prob[j] * d;
        m2 += prob[j] * d * d;
        w += prob[j];
    }
    m1 /= w;
    m2 /= w;
    *mean = v0 + m1;
    *var = m2 - m1 * m1;
}

}  // namespace

double torus_mean(const HybridState& s, std::size_t mode, RepTag rep) {
    const auto prob = marginal(s, mode, rep);
    const auto& vals =
        (rep == RepTag::Position) ? s.grid(mode).positions() : s.grid(mode).momenta();
    const double span = (rep == RepTag::Position)
                            ? s.grid(mode).length()
                            : s.grid(mode).dp() * static_cast<double>(s.grid(mode).n());
    double mean = 0.0, var = 0.0;
    recentered_moments(prob, vals, span, &mean, &var);
    return mean;
}

double variance(const HybridState& s, const OperatorExpr& obs) {
    std::size_t mode = 0;
    RepTag rep = RepTag::Position;
    double var = 0.0;
    if (is_bare_variable(obs, &mode, &rep)) {
        if (mode >= s.mode_count()) {
            throw std::invalid_argument("variance: mode-2 symbol on single-mode state");
        }
        const auto prob = marginal(s, mode, rep);
        const auto& vals =
            (rep == RepTag::Position) ? s.grid(mode).positions() : s.grid(mode).momenta();
        const double span = (rep == RepTag::Position)
                                ? s.grid(mode).length()
                                : s.grid(mode).dp() * static_cast<double>(s.grid(mode).n());
        double mean = 0.0;
        recentered_moments(prob, vals, span, &mean, &var);
    } else {
        const double m1 = expectation(s, obs);
        const double m2 = expectation(s, (obs * obs).simplified());
        var = m2 - m1 * m1;
    }
    if (var < -1e-10) {
        throw std::runtime_error("variance: negative beyond tolerance");
    }
    return var;
}

QubitPairDensity reduce_to_qubits(const HybridState& s) {
    QubitPairDensity d;
    d.rho.setZero();
    const auto& a = s.amplitudes();
    const std::size_t groups = s.size() / 4;
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t base = g * 4;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                d.rho(i, j) += a[base + i] * std::conj(a[base + j]);
            }
        }
    }
    const double tr = d.rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-10) {
        throw std::runtime_error("reduce_to_qubits: trace deviates from 1");
    }
    const double herm = (d.rho - d.rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) {
        throw std::runtime_error("reduce_to_qubits: not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(d.rho);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw std::runtime_error("reduce_to_qubits: negative eigenvalue beyond tolerance");
    }
    // clip tiny negatives, renormalize
    Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0);
    w /= w.sum();
    d.rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
    return d;
}

double negativity(const QubitPairDensity& d) {
    Eigen::Matrix4cd pt;
    // indices (q1 q2): partial transpose on qubit 2 swaps the q2 indices.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    pt(2 * i + l, 2 * k + j) = d.rho(2 * i + j, 2 * k + l);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt);
    double neg = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double w = es.eigenvalues()(i);
        if (w < 0.0) neg += -w;
    }
    return neg;
}

double purity(const QubitPairDensity& d) {
    return (d.rho * d.rho).trace().real();
}

namespace {

double entropy_bits(const Eigen::VectorXd& w) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double p = w(i);
        if (p > 1e-14) s -= p * std::log2(p);
    }
    return s;
}

}  // namespace

double entanglement_entropy(const HybridState& s, EntropyCut cut) {
    if (cut == EntropyCut::QubitPair) {
        const auto d = reduce_to_qubits(s);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(d.rho);
        return entropy_bits(es.eigenvalues());
    }
    // single-qubit reduction
    const auto d = reduce_to_qubits(s);
    Eigen::Matrix2cd r;
    r.setZero();
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int o = 0; o < 2; ++o) {
                if (cut == EntropyCut::Qubit1) {
                    r(a, b) += d.rho(2 * a + o, 2 * b + o);
                } else {
                    r(a, b) += d.rho(2 * o + a, 2 * o + b);
                }
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(r);
    return entropy_bits(es.eigenvalues());
}

std::array<double, 3> bloch_vector(const QubitPairDensity& d, int which) {
    Eigen::Matrix2cd r;
    r.setZero();
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int o = 0; o < 2; ++o) {
                if (which == 1) {
                    r(a, b) += d.rho(2 * a + o, 2 * b + o);
                } else {
                    r(a, b) += d.rho(2 * o + a, 2 * o + b);
                }
            }
        }
    }
    return {2.0 * r(0, 1).real(), -2.0 * r(0, 1).imag(), (r(0, 0) - r(1, 1)).real()};
}

ConservationAudit conservation_drift(const HamiltonianSpec& h, const OperatorExpr& c,
                                     const HybridState& s0, const std::vector<double>& t_grid,
                                     std::size_t strang_steps) {
    // exact path available when H is exactly FreeKvN + QubitCouplingZ(both)
    bool exact = h.terms.size() == 2 && std::holds_alternative<FreeKvN>(h.terms[0]) &&
                 std::holds_alternative<QubitCouplingZ>(h.terms[1]) &&
                 std::get<QubitCouplingZ>(h.terms[1]).on1 &&
                 std::get<QubitCouplingZ>(h.terms[1]).on2;

    ConservationAudit audit;
    audit.quantity = c;
    double base = 0.0;
    bool have_base = false;
    for (const double t : t_grid) {
        HybridState st = s0;
        if (t != 0.0) {
            if (exact) {
                st = factorized_propagator(s0, std::get<FreeKvN>(h.terms[0]).m,
                                           std::get<QubitCouplingZ>(h.terms[1]).lambda, t);
            } else {
                st = strang_evolve(s0, h, t, strang_steps);
            }
        }
        const double v = expectation(st, c);
        if (!have_base) {
            base = v;
            have_base = true;
        }
        audit.times.push_back(t);
        audit.series.push_back(v);
        audit.max_drift = std::max(audit.max_drift, std::abs(v - base));
    }
    return audit;
}

}  // namespace kvn
