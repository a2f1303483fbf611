#include <doctest.h>

#include <cmath>
#include <random>

#include "kvnlab/dense_oracle.hpp"
#include "kvnlab/observe.hpp"
#include "kvnlab/propagate.hpp"

using namespace kvn;

namespace {

std::array<cplx, 2> rand_qubit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<cplx, 2> q{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
    const double n = std::sqrt(std::norm(q[0]) + std::norm(q[1]));
    q[0] /= n;
    q[1] /= n;
    return q;
}

}  // namespace

TEST_CASE("free factor: t=0 identity, integer-site relocation exact") {
    const GridSpec g = make_grid(64, 20.0);
    InitialCondition ic;
    ic.p0 = g.momentum(8);  // 8 dp
    const HybridState s0 = make_state(g, g, ic);

    const Factor f = FreeKvN{1.0};
    const HybridState same = with_reps(apply_factor(s0, f, 0.0), RepTag::Position, RepTag::Momentum);
    for (std::size_t i = 0; i < s0.size(); ++i) {
        CHECK(std::abs(same.amplitudes()[i] - s0.amplitudes()[i]) < 1e-13);
    }

    // choose t so the displacement is exactly 4 lattice sites
    const double t = 4.0 * g.dx() / ic.p0;
    const HybridState st = apply_factor(s0, f, t);
    CHECK(std::abs(expectation(st, ops::x1()) - 4.0 * g.dx()) < 1e-10);
    CHECK(std::abs(expectation(st, ops::p2()) - ic.p0) < 1e-12);
    CHECK(std::abs(norm(st) - 1.0) < 1e-12);
    // delta relocated: single nonzero amplitude in position marginal
    const auto marg = marginal(st, 0, RepTag::Position);
    int support = 0;
    for (double p : marg) {
        if (p > 1e-18) ++support;
    }
    CHECK(support == 1);
}

TEST_CASE("no spreading under free evolution") {
    const GridSpec g = make_grid(64, 20.0);

    SUBCASE("delta profile at commensurate displacements") {
        InitialCondition ic;
        ic.p0 = g.momentum(8);
        const HybridState s0 = make_state(g, g, ic);
        const double var0 = variance(s0, ops::x1());
        for (int sites = 2; sites <= 14; sites += 4) {
            const double t = sites * g.dx() / ic.p0;
            const HybridState st = apply_factor(s0, FreeKvN{1.0}, t);
            CHECK(std::abs(variance(st, ops::x1()) - var0) < 1e-9);
        }
    }

    SUBCASE("gaussian profile at arbitrary times") {
        InitialCondition ic;
        ic.p0 = g.momentum(8);
        ic.profile = Profile::Gaussian;
        ic.sigma_x = 1.0;
        const HybridState s0 = make_state(g, g, ic);
        const double var0 = variance(s0, ops::x1());
        for (const double t : {0.37, 0.91, 1.48}) {
            const HybridState st = apply_factor(s0, FreeKvN{1.0}, t);
            CHECK(std::abs(variance(st, ops::x1()) - var0) < 1e-9);
            CHECK(std::abs(expectation(st, ops::x1()) - ic.p0 * t) < 1e-9);
        }
    }
}

TEST_CASE("qubit coupling rotates qubit phases by 2 lambda x0 t about Z") {
    const GridSpec g = make_grid(32, 10.0);
    InitialCondition ic;
    ic.x0 = g.position(20);
    const double s = 1.0 / std::sqrt(2.0);
    ic.qubit1 = {cplx(s, 0.0), cplx(s, 0.0)};  // |+>
    const HybridState s0 = make_state(g, g, ic);

    const double lam = 0.8, t = 0.45;
    const HybridState st = apply_factor(s0, Factor(QubitCouplingZ{lam, true, true}), t);

    // 4-dim exact diagonalization of the Z-sum: qubit-1 coherence rotates by
    // 2 lambda x0 t when qubit 2 sits in |0>
    const auto rho = reduce_to_qubits(st);
    const auto bloch = bloch_vector(rho, 1);
    const double angle = std::atan2(bloch[1], bloch[0]);
    const double expect = 2.0 * lam * ic.x0 * t;  // relative phase of |1> vs |0>
    const double diff = std::remainder(angle - expect, 2.0 * M_PI);
    CHECK(std::abs(diff) < 1e-10);
}

TEST_CASE("factorized propagator: identity at t=0 and Z-eigenstate separability") {
    const GridSpec g = make_grid(16, 8.0);
    InitialCondition ic;
    const HybridState s0 = make_state(g, g, ic);
    const HybridState same = factorized_propagator(s0, 1.0, 1.3, 0.0);
    CHECK(fidelity(same, s0) == doctest::Approx(1.0).epsilon(1e-14));

    // qubits in sigma_z eigenstates only acquire phases
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        std::uniform_real_distribution<double> lam_d(0.2, 2.0), t_d(0.1, 3.0);
        const HybridState st = factorized_propagator(s0, 1.0, lam_d(rng), t_d(rng));
        CHECK(negativity(reduce_to_qubits(st)) < 1e-12);
        CHECK(entanglement_entropy(st, EntropyCut::QubitPair) < 1e-10);
    }
}

TEST_CASE("factorized propagator matches dense oracle on resolved states") {
    // mode 1 well resolved (n=64 at the balanced width), mode 2 a 4-point
    // momentum register; the oracle dimension stays at 1024
    const double L1 = std::sqrt(2.0 * M_PI * 64.0);
    const GridSpec g1 = make_grid(64, L1);
    const GridSpec g2 = make_grid(4, 2.0 * M_PI);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lam_d(0.1, 1.5), t_d(0.1, 1.2), x_d(-2.0, 2.0);
    std::uniform_int_distribution<int> p_bin(-1, 1);

    HamiltonianSpec h;
    h.terms.push_back(FreeKvN{1.0});
    h.terms.push_back(QubitCouplingZ{1.0, true, true});
    const std::vector<GridSpec> grids{g1, g2};
    const std::vector<RepTag> reps{RepTag::Position, RepTag::Momentum};

    for (int trial = 0; trial < 3; ++trial) {
        const double lam = lam_d(rng), t = t_d(rng);
        InitialCondition ic;
        ic.profile = Profile::Gaussian;
        ic.sigma_x = 1.0;
        (void)x_d;
        ic.x0 = g1.position(32 + static_cast<int>(rng() % 13) - 6);
        ic.p0 = g2.dp() * p_bin(rng);
        ic.qubit1 = rand_qubit(rng);
        ic.qubit2 = rand_qubit(rng);
        const HybridState s0 = make_state(g1, g2, ic);

        const HybridState sf = factorized_propagator(s0, 1.0, lam, t);
        std::get<QubitCouplingZ>(h.terms[1]).lambda = lam;
        const Eigen::MatrixXcd u = dense_oracle_unitary(h, grids, reps, t);
        const HybridState sd = apply_dense(u, s0, reps);
        CHECK(fidelity(sf, sd) >= 1.0 - 1e-8);
    }
}

TEST_CASE("strang: single factor exact, convergence second order") {
    const GridSpec g = make_grid(16, 8.0);
    InitialCondition ic;
    ic.profile = Profile::Gaussian;
    ic.sigma_x = 1.2;
    ic.sigma_p2 = 0.8;
    const double s = 1.0 / std::sqrt(2.0);
    ic.qubit1 = {cplx(s, 0.0), cplx(s, 0.0)};
    ic.qubit2 = ic.qubit1;
    const HybridState s0 = make_state(g, g, ic);

    SUBCASE("single-factor Hamiltonian is exact regardless of steps") {
        HamiltonianSpec h;
        h.terms.push_back(FreeKvN{1.0});
        const HybridState a = strang_evolve(s0, h, 0.9, 1);
        const HybridState b = apply_factor(s0, Factor(FreeKvN{1.0}), 0.9);
        CHECK(fidelity(a, b) >= 1.0 - 1e-12);
    }

    SUBCASE("zero steps rejected") {
        HamiltonianSpec h;
        h.terms.push_back(FreeKvN{1.0});
        CHECK_THROWS_AS(strang_evolve(s0, h, 1.0, 0), std::invalid_argument);
    }

    SUBCASE("second-order self-convergence on the entangler") {
        HamiltonianSpec h;
        h.terms.push_back(FreeKvN{1.0});
        h.terms.push_back(EntanglerAlpha{1.0});
        h.terms.push_back(EntanglerX1{1.0});
        h.terms.push_back(EntanglerP2{1.0});
        const double t = 0.5;
        const HybridState ref = strang_evolve(s0, h, t, 512);
        double prev_err = -1.0;
        for (const std::size_t steps : {16, 32, 64}) {
            const HybridState st = strang_evolve(s0, h, t, steps);
            const double err = std::sqrt(std::max(0.0, 1.0 - fidelity(st, ref)));
            if (prev_err > 0.0) {
                const double order = std::log2(prev_err / err);
                CHECK(order > 1.7);
                CHECK(order < 2.3);
            }
            prev_err = err;
        }
    }
}

TEST_CASE("strang matches factorized propagator on the coupled free Hamiltonian") {
    const GridSpec g = make_grid(16, 8.0);
    InitialCondition ic;
    ic.profile = Profile::Gaussian;
    ic.sigma_x = 1.0;
    const double s = 1.0 / std::sqrt(2.0);
    ic.qubit1 = {cplx(s, 0.0), cplx(s, 0.0)};
    const HybridState s0 = make_state(g, g, ic);

    HamiltonianSpec h;
    h.terms.push_back(FreeKvN{1.0});
    h.terms.push_back(QubitCouplingZ{1.0, true, true});

    const HybridState exact = factorized_propagator(s0, 1.0, 1.0, 1.0);
    double prev = -1.0;
    for (const std::size_t steps : {64, 128, 256}) {
        const HybridState st = strang_evolve(s0, h, 1.0, steps);
        const double deficit = 1.0 - fidelity(st, exact);
        CHECK(deficit < 1e-4);
        if (prev > 0.0 && deficit > 1e-14) {
            CHECK(prev / deficit > 3.0);  // ~x4 per doubling
        }
        prev = deficit;
    }
}

TEST_CASE("galilean boost shifts means and orderings commute elementwise") {
    const GridSpec g = make_grid(32, 16.0);
    InitialCondition ic;
    ic.x0 = g.position(10);
    ic.p0 = g.momentum(3);
    const HybridState s0 = make_state(g, g, ic);

    SUBCASE("identity at zero parameters") {
        const HybridState same = galilean_boost(s0, BoostParams{0.0, 0.0, 1.0});
        CHECK(fidelity(same, s0) >= 1.0 - 1e-14);
    }

    SUBCASE("position shift by 3 dx") {
        BoostParams b{3.0 * g.dx(), 0.0, 1.0};
        const HybridState st = galilean_boost(s0, b);
        CHECK(std::abs(expectation(st, ops::x1()) - (ic.x0 + 3.0 * g.dx())) < 1e-12);
    }

    SUBCASE("momentum shift by -m v") {
        BoostParams b{0.0, 2.0 * g.dp() / 1.5, 1.5};  // m v = 2 dp
        const HybridState st = galilean_boost(s0, b);
        CHECK(std::abs(expectation(st, ops::p2()) - (ic.p0 - 2.0 * g.dp())) < 1e-12);
    }

    SUBCASE("order swap is elementwise identical") {
        BoostParams ba{3.0 * g.dx(), 0.0, 1.0};
        BoostParams bv{0.0, 2.0 * g.dp(), 1.0};
        const HybridState ab = galilean_boost(galilean_boost(s0, ba), bv);
        const HybridState rev = galilean_boost(galilean_boost(s0, bv), ba);
        const HybridState a2 = with_reps(ab, RepTag::Position, RepTag::Momentum);
        const HybridState r2 = with_reps(rev, RepTag::Position, RepTag::Momentum);
        double max_dev = 0.0;
        for (std::size_t i = 0; i < a2.size(); ++i) {
            max_dev = std::max(max_dev, std::abs(a2.amplitudes()[i] - r2.amplitudes()[i]));
        }
        CHECK(max_dev < 1e-12);
    }

    SUBCASE("off-lattice parameters rejected") {
        CHECK_THROWS_AS(galilean_boost(s0, BoostParams{0.4 * g.dx(), 0.0, 1.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(galilean_boost(s0, BoostParams{0.0, 0.4 * g.dp(), 1.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("weyl phase defect: quantum pair vs Koopman pair") {
    const GridSpec g = make_grid(64, 16.0);

    SUBCASE("zero displacement gives zero defect") {
        CHECK(weyl_phase_defect(0.0, 1.0, 0.0, g, WeylPair::QuantumSingleMode) ==
              doctest::Approx(0.0));
    }

    SUBCASE("quantum pair: defect equals a m v mod 2 pi") {
        // a m v = pi/2 exactly: a = 2 dx, m v = pi / (4 dx) must be on dp lattice
        // dx = 0.25, dp = 2 pi / 16 = 0.3927; choose a = 8 dx = 2, m v = 2 dp
        const double a = 8.0 * g.dx();
        const double mv = 2.0 * g.dp();
        const double defect = weyl_phase_defect(a, 1.0, mv, g, WeylPair::QuantumSingleMode);
        const double expect = std::remainder(a * mv, 2.0 * M_PI);
        CHECK(std::abs(std::remainder(defect - expect, 2.0 * M_PI)) < 1e-9);
    }

    SUBCASE("koopman pair: defect identically zero") {
        const double a = 8.0 * g.dx();
        const double mv = 2.0 * g.dp();
        const double defect = weyl_phase_defect(a, 1.0, mv, g, WeylPair::KoopmanHidden);
        CHECK(std::abs(defect) < 1e-12);
    }

    SUBCASE("incommensurate shifts rejected") {
        CHECK_THROWS_AS(weyl_phase_defect(0.3 * g.dx(), 1.0, g.dp(), g,
                                          WeylPair::QuantumSingleMode),
                        std::invalid_argument);
    }
}

TEST_CASE("norm preserved by every evolution path") {
    const GridSpec g = make_grid(16, 8.0);
    InitialCondition ic;
    ic.profile = Profile::Gaussian;
    ic.sigma_x = 1.1;
    ic.sigma_p2 = 0.9;
    const HybridState s0 = make_state(g, g, ic);

    HamiltonianSpec h;
    h.terms.push_back(FreeKvN{1.0});
    h.terms.push_back(HarmonicKvN{0.7});
    h.terms.push_back(QubitCouplingZ{0.9, true, true});
    h.terms.push_back(EntanglerAlpha{0.5});
    h.terms.push_back(EntanglerX1{0.6});
    h.terms.push_back(EntanglerP2{0.4});

    const HybridState st = strang_evolve(s0, h, 1.3, 64);
    CHECK(std::abs(norm(st) - 1.0) < 1e-10);
    const HybridState sf = factorized_propagator(s0, 1.0, 2.0, 2.0);
    CHECK(std::abs(norm(sf) - 1.0) < 1e-10);
}
