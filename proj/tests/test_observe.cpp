#include <doctest.h>

#include <cmath>
#include <random>

#include "kvnlab/dense_oracle.hpp"
#include "kvnlab/observe.hpp"
#include "kvnlab/propagate.hpp"

using namespace kvn;

namespace {

QubitPairDensity from_vec(const Eigen::Vector4cd& v) {
    QubitPairDensity d;
    d.rho = v * v.adjoint();
    return d;
}

}  // namespace

TEST_CASE("expectation basics") {
    const GridSpec g = make_grid(32, 20.0);
    InitialCondition ic;
    ic.x0 = 1.25;  // on the lattice: dx = 0.625
    const HybridState s = make_state(g, g, ic);
    CHECK(expectation(s, ops::x1()) == doctest::Approx(1.25).epsilon(1e-12));

    InitialCondition icp;
    const double r = 1.0 / std::sqrt(2.0);
    icp.qubit1 = {cplx(r, 0.0), cplx(r, 0.0)};
    const HybridState sp = make_state(g, g, icp);
    CHECK(std::abs(expectation(sp, ops::sz1())) < 1e-14);
    CHECK(expectation(sp, ops::sx1()) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(expectation(s, (cplx(0.0, 1.0) * ops::x1()).simplified()),
                    std::invalid_argument);
}

TEST_CASE("expectation rejects mode-2 symbols on single-mode states") {
    const GridSpec g = make_grid(32, 20.0);
    InitialCondition ic;
    const HybridState s = make_state_single(g, ic);
    CHECK_THROWS_AS(expectation(s, ops::x2()), std::invalid_argument);
    CHECK(expectation(s, ops::x1()) == doctest::Approx(0.0));
}

TEST_CASE("variance: delta zero, gaussian matches lattice sum, free evolution flat") {
    const GridSpec g = make_grid(64, 20.0);
    InitialCondition ic;
    const HybridState sd = make_state(g, g, ic);
    CHECK(variance(sd, ops::x1()) == doctest::Approx(0.0));

    InitialCondition icg;
    icg.profile = Profile::Gaussian;
    icg.sigma_x = 1.0;
    icg.p0 = g.momentum(8);
    const HybridState sg = make_state(g, g, icg);
    const double var0 = variance(sg, ops::x1());
    CHECK(std::abs(var0 - 0.5) < 0.01);  // sigma_g^2/2 within 2%

    const HybridState st = apply_factor(sg, Factor(FreeKvN{1.0}), 0.73);
    CHECK(std::abs(variance(st, ops::x1()) - var0) < 1e-9);
}

TEST_CASE("variance of general observables via moments") {
    const GridSpec g = make_grid(32, 12.0);
    InitialCondition ic;
    const double r = 1.0 / std::sqrt(2.0);
    ic.qubit1 = {cplx(r, 0.0), cplx(r, 0.0)};
    const HybridState s = make_state(g, g, ic);
    // Var(sz1) = 1 for |+>
    CHECK(variance(s, ops::sz1()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reduce_to_qubits: product purity and representation invariance") {
    const GridSpec g = make_grid(16, 8.0);
    InitialCondition ic;
    const double r = 1.0 / std::sqrt(2.0);
    ic.qubit1 = {cplx(r, 0.0), cplx(r, 0.0)};
    ic.qubit2 = ic.qubit1;
    ic.profile = Profile::Gaussian;
    ic.sigma_x = 1.0;
    const HybridState s = make_state(g, g, ic);

    const auto rho = reduce_to_qubits(s);
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(rho.rho.trace().real() - 1.0) < 1e-12);

    const HybridState sm = with_reps(s, RepTag::Momentum, RepTag::Position);
    const auto rho2 = reduce_to_qubits(sm);
    CHECK((rho.rho - rho2.rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("negativity closed-form values") {
    Eigen::Vector4cd bell;
    bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    const auto rho_bell = from_vec(bell);
    CHECK(negativity(rho_bell) == doctest::Approx(0.5).epsilon(1e-12));

    // Werner state p = 0.5: negativity = |(1-3p)/4| = 0.125
    QubitPairDensity w;
    w.rho = 0.5 * rho_bell.rho + 0.5 * Eigen::Matrix4cd::Identity() / 4.0;
    CHECK(negativity(w) == doctest::Approx(0.125).epsilon(1e-12));

    Eigen::Vector4cd prod;
    prod << 0.6, 0.8, 0.0, 0.0;  // |0> x (0.6|0> + 0.8|1>)
    CHECK(negativity(from_vec(prod)) < 1e-14);
}

TEST_CASE("negativity invariant under local qubit unitaries") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const GridSpec g = make_grid(8, 8.0);
    InitialCondition ic;
    HybridState s = make_state(g, g, ic);
    for (auto& a : s.amplitudes()) a = cplx(u(rng), u(rng));
    normalize(s);
    const double n0 = negativity(reduce_to_qubits(s));

    auto apply_local = [](HybridState st, int which, double th, double ph) {
        // U = [[cos, -e^{-i ph} sin], [e^{i ph} sin, cos]]
        const cplx u00(std::cos(th), 0.0);
        const cplx u01 = -std::polar(std::sin(th), -ph);
        const cplx u10 = std::polar(std::sin(th), ph);
        const cplx u11(std::cos(th), 0.0);
        auto& a = st.amplitudes();
        for (std::size_t gidx = 0; gidx < st.size() / 4; ++gidx) {
            const std::size_t base = gidx * 4;
            if (which == 1) {
                for (std::size_t q2 = 0; q2 < 2; ++q2) {
                    const cplx a0 = a[base + q2], a1 = a[base + 2 + q2];
                    a[base + q2] = u00 * a0 + u01 * a1;
                    a[base + 2 + q2] = u10 * a0 + u11 * a1;
                }
            } else {
                for (std::size_t q1 = 0; q1 < 2; ++q1) {
                    const cplx a0 = a[base + 2 * q1], a1 = a[base + 2 * q1 + 1];
                    a[base + 2 * q1] = u00 * a0 + u01 * a1;
                    a[base + 2 * q1 + 1] = u10 * a0 + u11 * a1;
                }
            }
        }
        return st;
    };

    for (int trial = 0; trial < 5; ++trial) {
        HybridState r = apply_local(s, 1, u(rng), u(rng));
        r = apply_local(r, 2, u(rng), u(rng));
        const double n1 = negativity(reduce_to_qubits(r));
        CHECK(std::abs(n1 - n0) < 1e-10);
    }
}

TEST_CASE("entanglement entropy: product zero, Bell one bit") {
    const GridSpec g = make_grid(8, 8.0);
    InitialCondition ic;
    HybridState s = make_state(g, g, ic);
    CHECK(entanglement_entropy(s, EntropyCut::Qubit1) < 1e-12);
    CHECK(entanglement_entropy(s, EntropyCut::QubitPair) < 1e-12);

    // Bell pair on the qubits at a single lattice cell
    for (auto& a : s.amplitudes()) a = cplx(0.0, 0.0);
    s.at(0, 0, 0, 0) = cplx(1.0 / std::sqrt(2.0), 0.0);
    s.at(0, 0, 1, 1) = cplx(1.0 / std::sqrt(2.0), 0.0);
    CHECK(entanglement_entropy(s, EntropyCut::Qubit1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(negativity(reduce_to_qubits(s)) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("purity of reduced pair stays within [1/4, 1]") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const GridSpec g = make_grid(8, 8.0);
    InitialCondition ic;
    for (int trial = 0; trial < 10; ++trial) {
        HybridState s = make_state(g, g, ic);
        for (auto& a : s.amplitudes()) a = cplx(u(rng), u(rng));
        normalize(s);
        const double p = purity(reduce_to_qubits(s));
        CHECK(p >= 0.25 - 1e-10);
        CHECK(p <= 1.0 + 1e-10);
    }
}

TEST_CASE("conservation drift: symbolic conservation implies flat series") {
    const GridSpec g = make_grid(16, 10.0);
    InitialCondition ic;
    ic.x0 = g.position(10);
    const double r = 1.0 / std::sqrt(2.0);
    ic.qubit2 = {cplx(r, 0.0), cplx(r, 0.0)};
    const HybridState s0 = make_state(g, g, ic);

    HamiltonianSpec h;
    h.terms.push_back(FreeKvN{1.0});
    h.terms.push_back(QubitCouplingZ{1.2, true, true});

    std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
    const auto audit = conservation_drift(h, ops::sz1(), s0, times);
    CHECK(audit.max_drift < 1e-9);
    CHECK(conserves(hamiltonian_expr(h), ops::sz1()));

    const auto audit0 = conservation_drift(h, ops::sz1(), s0, std::vector<double>{0.0});
    CHECK(audit0.max_drift == 0.0);
}

TEST_CASE("conservation drift: hidden-variable engagement moves sz1") {
    // 8x8 grid, dense-oracle cross-check of the strang path
    const GridSpec g = make_grid(8, 8.0);
    InitialCondition ic;
    ic.profile = Profile::Gaussian;
    ic.sigma_x = 1.3;
    ic.sigma_p2 = 1.0;
    const double r = 1.0 / std::sqrt(2.0);
    ic.qubit2 = {cplx(r, 0.0), cplx(r, 0.0)};
    const HybridState s0 = make_state(g, g, ic);

    HamiltonianSpec h;
    h.terms.push_back(FreeKvN{1.0});
    h.terms.push_back(EntanglerAlpha{1.0});
    h.terms.push_back(EntanglerX1{1.0});
    h.terms.push_back(EntanglerP2{1.0});

    std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
    const auto audit = conservation_drift(h, ops::sz1(), s0, times, 256);
    CHECK(audit.max_drift > 0.01);

    // dense oracle fixes the same baseline
    const std::vector<GridSpec> grids{g, g};
    const std::vector<RepTag> reps{RepTag::Position, RepTag::Momentum};
    const Eigen::MatrixXcd u = dense_oracle_unitary(h, grids, reps, 1.0);
    const HybridState sd = apply_dense(u, s0, reps);
    const double sz_dense = expectation(sd, ops::sz1());
    const double sz_strang = audit.series.back();
    CHECK(std::abs(sz_dense - sz_strang) < 1e-3);
}

TEST_CASE("dense oracle: identity at t=0, hermiticity, unitarity, cross path") {
    const GridSpec g = make_grid(8, 8.0);
    const std::vector<GridSpec> grids{g, g};
    const std::vector<RepTag> reps{RepTag::Position, RepTag::Momentum};

    HamiltonianSpec h;
    h.terms.push_back(QubitCouplingZ{0.9, true, true});

    const Eigen::MatrixXcd u0 = dense_oracle_unitary(h, grids, reps, 0.0);
    CHECK((u0 - Eigen::MatrixXcd::Identity(u0.rows(), u0.cols())).cwiseAbs().maxCoeff() < 1e-12);

    // two independent code paths agree
    InitialCondition ic;
    ic.x0 = g.position(5);
    const double r = 1.0 / std::sqrt(2.0);
    ic.qubit1 = {cplx(r, 0.0), cplx(r, 0.0)};
    const HybridState s0 = make_state(g, g, ic);
    const double t = 0.8;
    const Eigen::MatrixXcd u = dense_oracle_unitary(h, grids, reps, t);
    const HybridState sd = apply_dense(u, s0, reps);
    const HybridState sf = apply_factor(s0, Factor(QubitCouplingZ{0.9, true, true}), t);
    CHECK(fidelity(sd, sf) >= 1.0 - 1e-10);

    // dimension cap honored
    const GridSpec big = make_grid(64, 20.0);
    CHECK_THROWS_AS(dense_hamiltonian(h, {big, big}, reps), std::invalid_argument);
}
