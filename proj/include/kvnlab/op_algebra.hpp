// op_algebra.hpp
// Exact symbolic algebra over normal-ordered polynomials in the canonical
// operators x1, p1, x2, p2 tensored with Pauli factors on two qubits.
// Normal order per mode is x-before-p; reordering uses the canonical
// commutation relation [x_i, p_i] = i. Coefficients are complex doubles;
// all integer-coefficient manipulations are exact below 2^53, and is_zero
// applies a 1e-12 relative threshold for float-valued inputs.

#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>

namespace kvn {

using cplx = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

// Degree guard: all expressions in scope are degree <= 2 per variable, so a
// product never legitimately exceeds exponent 8.
inline constexpr unsigned kExponentGuard = 8;

struct Monomial {
    // exponents of x1, p1, x2, p2 in normal order
    std::array<std::uint8_t, 4> pw{0, 0, 0, 0};
    Pauli q1 = Pauli::I;
    Pauli q2 = Pauli::I;

    auto operator<=>(const Monomial&) const = default;
};

class OperatorExpr {
public:
    OperatorExpr() = default;

    static OperatorExpr zero() { return {}; }
    static OperatorExpr unit();

    const std::map<Monomial, cplx>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    OperatorExpr& add_term(const Monomial& m, cplx c);

    OperatorExpr operator+(const OperatorExpr& o) const;
    OperatorExpr operator-(const OperatorExpr& o) const;
    OperatorExpr operator*(const OperatorExpr& o) const;
    friend OperatorExpr operator*(cplx c, const OperatorExpr& e);
    friend OperatorExpr operator*(double c, const OperatorExpr& e);
    OperatorExpr operator-() const;

    // Drops coefficients below 1e-12 relative to the largest magnitude.
    OperatorExpr simplified() const;

    std::string str() const;

private:
    std::map<Monomial, cplx> terms_;
};

bool is_zero(const OperatorExpr& a);
bool equals(const OperatorExpr& a, const OperatorExpr& b);

OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b);

// dA/dt = i [H, A]
OperatorExpr heisenberg_rhs(const OperatorExpr& h, const OperatorExpr& a);

OperatorExpr adjoint(const OperatorExpr& a);
bool is_hermitian(const OperatorExpr& a);

// W = [X, Y]; central iff [X, W] = [Y, W] = 0. When central,
// e^{X+Y} = e^X e^Y e^C holds exactly with C = -W/2; otherwise C is advisory.
struct ZassenhausFactor {
    OperatorExpr c;
    bool central = false;
};
ZassenhausFactor zassenhaus_central_factor(const OperatorExpr& x, const OperatorExpr& y);

bool conserves(const OperatorExpr& h, const OperatorExpr& c);

std::array<std::array<cplx, 2>, 2> pauli_matrix(Pauli p);

// Single-symbol builders.
namespace ops {
OperatorExpr unit();
OperatorExpr x1();
OperatorExpr p1();
OperatorExpr x2();
OperatorExpr p2();
OperatorExpr pauli1(Pauli p);
OperatorExpr pauli2(Pauli p);
inline OperatorExpr sx1() { return pauli1(Pauli::X); }
inline OperatorExpr sy1() { return pauli1(Pauli::Y); }
inline OperatorExpr sz1() { return pauli1(Pauli::Z); }
inline OperatorExpr sx2() { return pauli2(Pauli::X); }
inline OperatorExpr sy2() { return pauli2(Pauli::Y); }
inline OperatorExpr sz2() { return pauli2(Pauli::Z); }
}  // namespace ops

}  // namespace kvn
