#include "kvnlab/hamiltonian.hpp"

#include <stdexcept>

namespace kvn {

namespace {

void check_poly(const std::vector<double>& c, const char* what) {
    if (c.size() > 5) {
        throw std::invalid_argument(std::string(what) + ": polynomial degree must be <= 4");
    }
}

void check_mass(double m, const char* what) {
    if (!(m > 0.0)) throw std::invalid_argument(std::string(what) + ": mass must be > 0");
}

OperatorExpr poly_in(const OperatorExpr& v, const std::vector<double>& c) {
    OperatorExpr acc = OperatorExpr::zero();
    OperatorExpr pw = OperatorExpr::unit();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i > 0) pw = pw * v;
        if (c[i] != 0.0) acc = acc + c[i] * pw;
    }
    return acc;
}

}  // namespace

std::size_t factor_mode_count(const Factor& f) {
    return std::visit(
        [](const auto& v) -> std::size_t {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, QuantumKinetic> ||
                          std::is_same_v<T, QuantumPotential> ||
                          std::is_same_v<T, QuantumQubitCoupling>) {
                return 1;
            } else {
                return 2;
            }
        },
        f);
}

void validate(const HamiltonianSpec& spec) {
    if (spec.terms.empty()) {
        throw std::invalid_argument("HamiltonianSpec: no factors");
    }
    const std::size_t modes = factor_mode_count(spec.terms.front());
    for (const auto& f : spec.terms) {
        if (factor_mode_count(f) != modes) {
            throw std::invalid_argument("HamiltonianSpec: mixed single/two-mode factors");
        }
        std::visit(
            [](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, FreeKvN>) check_mass(v.m, "FreeKvN");
                if constexpr (std::is_same_v<T, QuantumKinetic>) check_mass(v.m, "QuantumKinetic");
                if constexpr (std::is_same_v<T, PotentialKvN>) check_poly(v.vprime, "PotentialKvN");
                if constexpr (std::is_same_v<T, QuantumPotential>) check_poly(v.v, "QuantumPotential");
            },
            f);
    }
}

std::vector<Atom> atoms_of(const Factor& f) {
    std::vector<Atom> out;
    std::visit(
        [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FreeKvN>) {
                out.push_back({Atom::Kind::FreePP, v.m, {}, true, true});
            } else if constexpr (std::is_same_v<T, HarmonicKvN>) {
                out.push_back({Atom::Kind::PotentialXX, 0.0, {0.0, v.k}, true, true});
            } else if constexpr (std::is_same_v<T, PotentialKvN>) {
                out.push_back({Atom::Kind::PotentialXX, 0.0, v.vprime, true, true});
            } else if constexpr (std::is_same_v<T, QubitCouplingZ>) {
                out.push_back({Atom::Kind::CouplingZX1, v.lambda, {}, v.on1, v.on2});
            } else if constexpr (std::is_same_v<T, EntanglerAlpha>) {
                out.push_back({Atom::Kind::AlphaX1P2, v.alpha, {}, true, true});
                out.push_back({Atom::Kind::AlphaP1X2, v.alpha, {}, true, true});
            } else if constexpr (std::is_same_v<T, EntanglerX1>) {
                out.push_back({Atom::Kind::RotX1, v.lambda1, {}, true, true});
            } else if constexpr (std::is_same_v<T, EntanglerP2>) {
                out.push_back({Atom::Kind::CouplingZP2, v.lambda2, {}, false, true});
            } else if constexpr (std::is_same_v<T, QuantumKinetic>) {
                out.push_back({Atom::Kind::QuantKinetic, v.m, {}, true, true});
            } else if constexpr (std::is_same_v<T, QuantumPotential>) {
                out.push_back({Atom::Kind::QuantPotential, 0.0, v.v, true, true});
            } else if constexpr (std::is_same_v<T, QuantumQubitCoupling>) {
                out.push_back({Atom::Kind::QuantCouplZ, v.lambda, {}, true, true});
            }
        },
        f);
    return out;
}

std::vector<Atom> atoms_of(const HamiltonianSpec& spec) {
    validate(spec);
    std::vector<Atom> out;
    for (const auto& f : spec.terms) {
        for (auto& a : atoms_of(f)) out.push_back(std::move(a));
    }
    return out;
}

OperatorExpr factor_expr(const Factor& f) {
    using namespace ops;
    return std::visit(
        [](const auto& v) -> OperatorExpr {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FreeKvN>) {
                return (1.0 / v.m) * (p1() * p2());
            } else if constexpr (std::is_same_v<T, HarmonicKvN>) {
                return v.k * (x1() * x2());
            } else if constexpr (std::is_same_v<T, PotentialKvN>) {
                return poly_in(x1(), v.vprime) * x2();
            } else if constexpr (std::is_same_v<T, QubitCouplingZ>) {
                OperatorExpr zsum = OperatorExpr::zero();
                if (v.on1) zsum = zsum + sz1();
                if (v.on2) zsum = zsum + sz2();
                return v.lambda * (x1() * zsum);
            } else if constexpr (std::is_same_v<T, EntanglerAlpha>) {
                return v.alpha * (x1() * p2() + p1() * x2());
            } else if constexpr (std::is_same_v<T, EntanglerX1>) {
                return v.lambda1 * (x1() * sx1());
            } else if constexpr (std::is_same_v<T, EntanglerP2>) {
                return v.lambda2 * (p2() * sz2());
            } else if constexpr (std::is_same_v<T, QuantumKinetic>) {
                return (0.5 / v.m) * (p1() * p1());
            } else if constexpr (std::is_same_v<T, QuantumPotential>) {
                return poly_in(x1(), v.v);
            } else {
                return v.lambda * (x1() * (sz1() + sz2()));
            }
        },
        f);
}

OperatorExpr hamiltonian_expr(const HamiltonianSpec& spec) {
    OperatorExpr acc = OperatorExpr::zero();
    for (const auto& f : spec.terms) acc = acc + factor_expr(f);
    return acc.simplified();
}

}  // namespace kvn
