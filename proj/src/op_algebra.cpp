#include "kvnlab/op_algebra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kvn {

namespace {

constexpr double kZeroRelTol = 1e-12;

// Pauli product table: (result, phase) with A*B = phase * result.
struct PauliProd {
    Pauli r;
    cplx phase;
};

PauliProd pauli_mul(Pauli a, Pauli b) {
    const cplx I(0.0, 1.0);
    if (a == Pauli::I) return {b, 1.0};
    if (b == Pauli::I) return {a, 1.0};
    if (a == b) return {Pauli::I, 1.0};
    // cyclic: X*Y = iZ, Y*Z = iX, Z*X = iY; reversed order picks up -i.
    auto idx = [](Pauli p) { return static_cast<int>(p); };
    const int ia = idx(a), ib = idx(b);
    // remaining Pauli index: {1,2,3} \ {ia, ib}
    const int ic = 6 - ia - ib;
    const bool forward = (ib - ia == 1) || (ia - ib == 2);  // X->Y->Z->X
    return {static_cast<Pauli>(ic), forward ? I : -I};
}

double binomial(unsigned n, unsigned k) {
    double r = 1.0;
    for (unsigned i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

double factorial(unsigned k) {
    double r = 1.0;
    for (unsigned i = 2; i <= k; ++i) r *= static_cast<double>(i);
    return r;
}

void check_guard(unsigned e) {
    if (e > kExponentGuard) {
        throw std::domain_error("op_algebra: exponent guard (8) exceeded");
    }
}

// (-i)^k, exact
cplx minus_i_pow(unsigned k) {
    switch (k % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

}  // namespace

OperatorExpr OperatorExpr::unit() {
    OperatorExpr e;
    e.add_term(Monomial{}, cplx(1.0, 0.0));
    return e;
}

OperatorExpr& OperatorExpr::add_term(const Monomial& m, cplx c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        if (c != cplx(0.0, 0.0)) terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == cplx(0.0, 0.0)) terms_.erase(it);
    }
    return *this;
}

OperatorExpr OperatorExpr::operator+(const OperatorExpr& o) const {
    OperatorExpr r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

OperatorExpr OperatorExpr::operator-(const OperatorExpr& o) const {
    OperatorExpr r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

OperatorExpr OperatorExpr::operator-() const {
    OperatorExpr r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

OperatorExpr operator*(cplx c, const OperatorExpr& e) {
    OperatorExpr r;
    if (c == cplx(0.0, 0.0)) return r;
    for (const auto& [m, v] : e.terms_) r.terms_.emplace(m, c * v);
    return r;
}

OperatorExpr operator*(double c, const OperatorExpr& e) {
    return cplx(c, 0.0) * e;
}

OperatorExpr OperatorExpr::operator*(const OperatorExpr& o) const {
    OperatorExpr out;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            // qubit factors
            const auto q1 = pauli_mul(ma.q1, mb.q1);
            const auto q2 = pauli_mul(ma.q2, mb.q2);
            const cplx base = ca * cb * q1.phase * q2.phase;

            // mode 1: (x^a1 p^b1)(x^a2 p^b2)
            //   p^b x^a = sum_k (-i)^k k! C(b,k) C(a,k) x^{a-k} p^{b-k}
            const unsigned a1 = ma.pw[0], b1 = ma.pw[1], a2 = mb.pw[0], b2 = mb.pw[1];
            const unsigned c1 = ma.pw[2], d1 = ma.pw[3], c2 = mb.pw[2], d2 = mb.pw[3];
            check_guard(a1 + a2);
            check_guard(b1 + b2);
            check_guard(c1 + c2);
            check_guard(d1 + d2);

            for (unsigned k = 0; k <= std::min(b1, a2); ++k) {
                const cplx ck = minus_i_pow(k) * factorial(k) *
                                binomial(b1, k) * binomial(a2, k);
                for (unsigned l = 0; l <= std::min(d1, c2); ++l) {
                    const cplx cl = minus_i_pow(l) * factorial(l) *
                                    binomial(d1, l) * binomial(c2, l);
                    Monomial m;
                    m.pw = {static_cast<std::uint8_t>(a1 + a2 - k),
                            static_cast<std::uint8_t>(b1 + b2 - k),
                            static_cast<std::uint8_t>(c1 + c2 - l),
                            static_cast<std::uint8_t>(d1 + d2 - l)};
                    m.q1 = q1.r;
                    m.q2 = q2.r;
                    out.add_term(m, base * ck * cl);
                }
            }
        }
    }
    return out.simplified();
}

OperatorExpr OperatorExpr::simplified() const {
    double max_abs = 0.0;
    for (const auto& [m, c] : terms_) max_abs = std::max(max_abs, std::abs(c));
    const double cut = kZeroRelTol * std::max(1.0, max_abs);
    OperatorExpr r;
    for (const auto& [m, c] : terms_) {
        if (std::abs(c) > cut) r.terms_.emplace(m, c);
    }
    return r;
}

std::string OperatorExpr::str() const {
    if (terms_.empty()) return "0";
    static const char* pauli_name[4] = {"I", "X", "Y", "Z"};
    static const char* var_name[4] = {"x1", "p1", "x2", "p2"};
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real();
        if (c.imag() >= 0) os << "+" << c.imag() << "i)";
        else os << c.imag() << "i)";
        for (int v = 0; v < 4; ++v) {
            for (unsigned e = 0; e < m.pw[v]; ++e) os << " " << var_name[v];
        }
        if (m.q1 != Pauli::I || m.q2 != Pauli::I) {
            os << " s[" << pauli_name[static_cast<int>(m.q1)] << pauli_name[static_cast<int>(m.q2)]
               << "]";
        }
    }
    return os.str();
}

bool is_zero(const OperatorExpr& a) {
    return a.simplified().empty();
}

bool equals(const OperatorExpr& a, const OperatorExpr& b) {
    return is_zero(a - b);
}

OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b) {
    return (a * b - b * a).simplified();
}

OperatorExpr heisenberg_rhs(const OperatorExpr& h, const OperatorExpr& a) {
    return (cplx(0.0, 1.0) * commutator(h, a)).simplified();
}

OperatorExpr adjoint(const OperatorExpr& a) {
    // (x^a p^b)^dag = p^b x^a, normal-ordered back via the CCR; Pauli factors
    // are self-adjoint.
    OperatorExpr out;
    for (const auto& [m, c] : a.terms()) {
        const unsigned ax = m.pw[0], bp = m.pw[1], cx = m.pw[2], dp = m.pw[3];
        for (unsigned k = 0; k <= std::min(bp, ax); ++k) {
            const cplx ck = minus_i_pow(k) * factorial(k) *
                            binomial(bp, k) * binomial(ax, k);
            for (unsigned l = 0; l <= std::min(dp, cx); ++l) {
                const cplx cl = minus_i_pow(l) * factorial(l) *
                                binomial(dp, l) * binomial(cx, l);
                Monomial mm = m;
                mm.pw = {static_cast<std::uint8_t>(ax - k), static_cast<std::uint8_t>(bp - k),
                         static_cast<std::uint8_t>(cx - l), static_cast<std::uint8_t>(dp - l)};
                out.add_term(mm, std::conj(c) * ck * cl);
            }
        }
    }
    return out.simplified();
}

bool is_hermitian(const OperatorExpr& a) {
    return equals(adjoint(a), a);
}

ZassenhausFactor zassenhaus_central_factor(const OperatorExpr& x, const OperatorExpr& y) {
    const OperatorExpr w = commutator(x, y);
    ZassenhausFactor zf;
    zf.central = is_zero(commutator(x, w)) && is_zero(commutator(y, w));
    zf.c = cplx(-0.5, 0.0) * w;
    return zf;
}

bool conserves(const OperatorExpr& h, const OperatorExpr& c) {
    return is_zero(commutator(h, c));
}

std::array<std::array<cplx, 2>, 2> pauli_matrix(Pauli p) {
    std::array<std::array<cplx, 2>, 2> m{};
    const cplx I(0.0, 1.0);
    switch (p) {
        case Pauli::I: m[0][0] = 1.0; m[1][1] = 1.0; break;
        case Pauli::X: m[0][1] = 1.0; m[1][0] = 1.0; break;
        case Pauli::Y: m[0][1] = -I; m[1][0] = I; break;
        case Pauli::Z: m[0][0] = 1.0; m[1][1] = -1.0; break;
    }
    return m;
}

namespace ops {

OperatorExpr unit() { return OperatorExpr::unit(); }

namespace {
OperatorExpr var(int which) {
    Monomial m;
    m.pw[which] = 1;
    OperatorExpr e;
    e.add_term(m, cplx(1.0, 0.0));
    return e;
}
}  // namespace

OperatorExpr x1() { return var(0); }
OperatorExpr p1() { return var(1); }
OperatorExpr x2() { return var(2); }
OperatorExpr p2() { return var(3); }

OperatorExpr pauli1(Pauli p) {
    Monomial m;
    m.q1 = p;
    OperatorExpr e;
    e.add_term(m, cplx(1.0, 0.0));
    return e;
}

OperatorExpr pauli2(Pauli p) {
    Monomial m;
    m.q2 = p;
    OperatorExpr e;
    e.add_term(m, cplx(1.0, 0.0));
    return e;
}

}  // namespace ops

}  // namespace kvn
