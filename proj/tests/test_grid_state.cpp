#include <doctest.h>

#include <cmath>
#include <random>

#include "kvnlab/observe.hpp"
#include "kvnlab/state.hpp"

using namespace kvn;

TEST_CASE("make_grid lattice arithmetic") {
    const GridSpec g = make_grid(64, 20.0);
    CHECK(g.dx() == doctest::Approx(0.3125).epsilon(1e-14));
    CHECK(g.dp() == doctest::Approx(2.0 * M_PI / 20.0).epsilon(1e-14));
    CHECK(std::abs(g.dx() * g.dp() * static_cast<double>(g.n()) - 2.0 * M_PI) < 1e-12);
    CHECK(g.positions().size() == 64);
    CHECK(g.momenta().size() == 64);
}

TEST_CASE("make_grid small lattice values") {
    const GridSpec g = make_grid(4, 4.0);
    CHECK(g.position(0) == doctest::Approx(-2.0));
    CHECK(g.position(1) == doctest::Approx(-1.0));
    CHECK(g.position(2) == doctest::Approx(0.0));
    CHECK(g.position(3) == doctest::Approx(1.0));
    // transform-ordered signed frequencies: 0, 1, -2, -1 (in dp units)
    CHECK(g.momentum(0) == doctest::Approx(0.0));
    CHECK(g.momentum(1) == doctest::Approx(g.dp()));
    CHECK(g.momentum(2) == doctest::Approx(-2.0 * g.dp()));
    CHECK(g.momentum(3) == doctest::Approx(-g.dp()));
}

TEST_CASE("make_grid rejects bad parameters") {
    CHECK_THROWS_AS(make_grid(3, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(2, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(64, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(64, -1.0), std::invalid_argument);
}

TEST_CASE("delta state has one amplitude and unit norm") {
    const GridSpec g = make_grid(16, 8.0);
    InitialCondition ic;  // delta at (0,0), qubits |0>|0>
    const HybridState s = make_state(g, g, ic);
    CHECK(norm(s) == doctest::Approx(1.0).epsilon(1e-14));
    int nonzero = 0;
    for (const auto& a : s.amplitudes()) {
        if (std::abs(a) > 0.0) ++nonzero;
    }
    CHECK(nonzero == 1);
}

TEST_CASE("make_state rejects off-lattice initial data") {
    const GridSpec g = make_grid(16, 8.0);
    InitialCondition ic;
    ic.x0 = 0.5 * g.dx();
    CHECK_THROWS_AS(make_state(g, g, ic), std::invalid_argument);
    ic.x0 = 0.0;
    ic.p0 = 0.5 * g.dp();
    CHECK_THROWS_AS(make_state(g, g, ic), std::invalid_argument);
}

TEST_CASE("make_state rejects unnormalized qubits and bad widths") {
    const GridSpec g = make_grid(16, 8.0);
    InitialCondition ic;
    ic.qubit1 = {cplx(1.0, 0.0), cplx(0.5, 0.0)};
    CHECK_THROWS_AS(make_state(g, g, ic), std::invalid_argument);
    InitialCondition ic2;
    ic2.profile = Profile::Gaussian;
    ic2.sigma_x = 0.5 * g.dx();  // below the 2 dx resolution floor
    CHECK_THROWS_AS(make_state(g, g, ic2), std::invalid_argument);
}

TEST_CASE("gaussian profile mean and variance against a direct lattice sum") {
    const GridSpec g = make_grid(64, 20.0);
    InitialCondition ic;
    ic.profile = Profile::Gaussian;
    ic.sigma_x = 1.0;
    const HybridState s = make_state(g, g, ic);

    // independent oracle: direct lattice sum of the normalized profile
    double w = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
        const double x = g.position(j);
        const double amp = std::exp(-x * x / (2.0 * ic.sigma_x * ic.sigma_x));
        w += amp * amp;
        m1 += amp * amp * x;
        m2 += amp * amp * x * x;
    }
    m1 /= w;
    m2 /= w;
    const double var_oracle = m2 - m1 * m1;

    CHECK(std::abs(expectation(s, ops::x1()) - 0.0) < 1e-10);
    const double var = variance(s, ops::x1());
    CHECK(var == doctest::Approx(var_oracle).epsilon(1e-12));
    // amplitude width sigma_g gives Var(x1) = sigma_g^2 / 2, within 2%
    CHECK(std::abs(var - 0.5 * ic.sigma_x * ic.sigma_x) <
          0.02 * 0.5 * ic.sigma_x * ic.sigma_x);
}

TEST_CASE("representation change: delta spreads flat, round trip is identity") {
    const GridSpec g = make_grid(32, 10.0);
    InitialCondition ic;
    const HybridState s = make_state(g, g, ic);

    const HybridState sm = to_representation(s, 0, RepTag::Momentum);
    const double expect_mag = 1.0 / std::sqrt(32.0);
    for (std::size_t j = 0; j < 32; ++j) {
        const double mag = std::abs(sm.amplitudes()[j * sm.mode_stride(0)]);
        CHECK(mag == doctest::Approx(expect_mag).epsilon(1e-12));
    }

    const HybridState back = to_representation(sm, 0, RepTag::Position);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        max_dev = std::max(max_dev, std::abs(back.amplitudes()[i] - s.amplitudes()[i]));
    }
    CHECK(max_dev < 1e-12);
}

TEST_CASE("representation round trips on random states preserve everything") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const GridSpec g = make_grid(16, 6.0);
    InitialCondition ic;
    HybridState s = make_state(g, g, ic);
    for (auto& a : s.amplitudes()) a = cplx(u(rng), u(rng));
    normalize(s);

    SUBCASE("norm preserved by each change") {
        const HybridState sm = to_representation(s, 0, RepTag::Momentum);
        CHECK(std::abs(norm(sm) - 1.0) < 1e-12);
        const HybridState sp = to_representation(sm, 1, RepTag::Position);
        CHECK(std::abs(norm(sp) - 1.0) < 1e-12);
    }

    SUBCASE("full round trip deviation < 1e-12") {
        HybridState r = s;
        r = to_representation(r, 0, RepTag::Momentum);
        r = to_representation(r, 1, RepTag::Position);
        r = to_representation(r, 0, RepTag::Position);
        r = to_representation(r, 1, RepTag::Momentum);
        double max_dev = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            max_dev = std::max(max_dev, std::abs(r.amplitudes()[i] - s.amplitudes()[i]));
        }
        CHECK(max_dev < 1e-12);
    }

    SUBCASE("already in target rep returns unchanged") {
        const HybridState same = to_representation(s, 0, RepTag::Position);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(same.amplitudes()[i] == s.amplitudes()[i]);
        }
    }

    SUBCASE("invalid mode index throws") {
        CHECK_THROWS_AS(to_representation(s, 2, RepTag::Momentum), std::invalid_argument);
    }
}

TEST_CASE("inner product basics") {
    const GridSpec g = make_grid(16, 8.0);
    InitialCondition ic;
    const HybridState a = make_state(g, g, ic);
    CHECK(std::abs(inner_product(a, a).real() - 1.0) < 1e-14);
    CHECK(std::abs(inner_product(a, a).imag()) < 1e-14);

    InitialCondition ic2;
    ic2.x0 = g.dx();
    const HybridState b = make_state(g, g, ic2);
    CHECK(std::abs(inner_product(a, b)) < 1e-14);

    // conjugate symmetry with a phase-carrying state
    InitialCondition ic3;
    ic3.qubit1 = {cplx(0.6, 0.0), cplx(0.0, 0.8)};
    const HybridState c = make_state(g, g, ic3);
    const cplx ab = inner_product(a, c);
    const cplx ba = inner_product(c, a);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-14);

    // auto-alignment of representations
    const HybridState cm = to_representation(c, 0, RepTag::Momentum);
    CHECK(std::abs(inner_product(a, cm) - ab) < 1e-12);
}

TEST_CASE("make_state output is a product state: pair negativity zero") {
    const GridSpec g = make_grid(16, 8.0);
    InitialCondition ic;
    ic.qubit1 = {cplx(1 / std::sqrt(2.0), 0), cplx(1 / std::sqrt(2.0), 0)};
    ic.qubit2 = {cplx(0.8, 0.0), cplx(0.0, 0.6)};
    const HybridState s = make_state(g, g, ic);
    CHECK(negativity(reduce_to_qubits(s)) < 1e-12);
}
