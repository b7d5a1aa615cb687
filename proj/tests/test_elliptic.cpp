#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "whitham/elliptic.hpp"

using namespace whitham;

TEST_SUITE_BEGIN("elliptic");

TEST_CASE("theta vanishes at 0 and at lattice points") {
    for (cplx tau : {cplx(0, 1), cplx(0, 1.5), cplx(0.2, 1.1)}) {
        HalfLattice L{tau};
        CHECK(std::abs(theta(0.0, L)) < 1e-14);
        CHECK(std::abs(theta(cplx(1.0), L)) < 1e-12);
        CHECK(std::abs(theta(tau, L)) < 1e-12);
        CHECK(std::abs(theta(3.0 - 2.0 * tau, L)) < 1e-10);
    }
}

TEST_CASE("theta quasi-periodicity on a random grid") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> ur(-1.5, 1.5);
    for (cplx tau : {cplx(0, 1), cplx(0, 1.5), cplx(0.2, 1.1)}) {
        HalfLattice L{tau};
        for (int i = 0; i < 100; ++i) {
            const cplx w{ur(rng), ur(rng)};
            const cplx t = theta(w, L);
            CHECK(std::abs(theta(w + 1.0, L) - t) < 1e-12 * (1.0 + std::abs(t)));
            const cplx lhs = theta(w + tau, L);
            const cplx rhs = -t * std::exp(-2.0 * pi * I * w);
            CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("theta against the independent q-series oracle") {
    const cplx w{0.3, 0.2};
    HalfLattice L{cplx(0, 1)};
    const cplx mine = theta(w, L);
    const cplx ref = oracles::theta_qseries(w, cplx(0, 1));
    CHECK(std::abs(mine - ref) < 1e-12 * std::abs(ref));

    // A non-rectangular modulus as well.
    HalfLattice L2{cplx(0.2, 1.1)};
    const cplx mine2 = theta(w, L2);
    const cplx ref2 = oracles::theta_qseries(w, cplx(0.2, 1.1));
    CHECK(std::abs(mine2 - ref2) < 1e-12 * std::abs(ref2));
}

TEST_CASE("theta_deriv0: finite differences, nonzero, linear in scale") {
    HalfLattice L{cplx(0, 1)};
    const cplx d = theta_deriv0(L);
    CHECK(std::abs(d) > 0.1);

    const double h = 1e-5;
    const cplx fd = (theta(h, L) - theta(-h, L)) / (2.0 * h);
    CHECK(std::abs(fd - d) < 1e-8 * std::abs(d));

    CHECK(std::abs(theta_deriv0(L, 2.0) - 2.0 * d) < 1e-14 * std::abs(d));
    CHECK(std::abs(theta(cplx(0.3, 0.1), L, 2.0) - 2.0 * theta(cplx(0.3, 0.1), L)) < 1e-14);
}

TEST_CASE("wp parity, poles, and lattice-sum oracle") {
    SpecLattice L{cplx(0, 1)};
    const cplx z{0.2, 0.1};
    CHECK(std::abs(wp(-z, L) - wp(z, L)) < 1e-11 * std::abs(wp(z, L)));
    CHECK(std::abs(wp_zeta(-z, L) + wp_zeta(z, L)) < 1e-11 * std::abs(wp_zeta(z, L)));

    // e1 against the Eisenstein oracle.
    oracles::WeierstrassOracle orc(cplx(0, 1));
    const cplx e1 = wp(0.5, L);
    CHECK(std::abs(e1 - orc.wp(0.5)) < 1e-10 * std::abs(e1));
    CHECK(std::abs(wp_prime(cplx(0.31, 0.17), L) - orc.wp_prime(cplx(0.31, 0.17))) < 1e-9);
    CHECK(std::abs(wp_zeta(cplx(0.25, -0.2), L) - orc.zeta(cplx(0.25, -0.2))) < 1e-11);

    // Pole marker, not a crash.
    const cplx at_pole = wp(cplx(1.0, 1.0), L);
    CHECK(std::isinf(at_pole.real()));
    CHECK(std::isinf(wp_zeta(0.0, L).real()));
}

TEST_CASE("wp differential equation") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ur(-0.45, 0.45);
    for (cplx ts : {cplx(0, 1), cplx(0, 2), cplx(0, 0.8)}) {
        SpecLattice L{ts};
        const auto [e1, e2, e3] = half_period_values(L);
        for (int i = 0; i < 25; ++i) {
            cplx z{ur(rng), ur(rng) * ts.imag()};
            if (detail::lattice_distance(z, ts) < 0.05) continue;
            const cplx p = wp(z, L);
            const cplx dp = wp_prime(z, L);
            const cplx lhs = dp * dp;
            const cplx rhs = 4.0 * (p - e1) * (p - e2) * (p - e3);
            CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("zeta expansion at the origin") {
    SpecLattice L{cplx(0, 1.3)};
    // zeta(z) - 1/z -> 0: check at a small argument.
    const cplx z{1e-4, 5e-5};
    CHECK(std::abs(wp_zeta(z, L) - 1.0 / z) < 1e-7);
}

TEST_CASE("Legendre relation and eta symmetry") {
    for (cplx ts : {cplx(0, 0.5), cplx(0, 1), cplx(0, 2)}) {
        SpecLattice L{ts};
        const auto [eta1, eta3] = eta_constants(L);
        const cplx legendre = eta1 * ts / 2.0 - eta3 / 2.0;
        CHECK(std::abs(legendre - I * pi / 2.0) < 1e-10);
    }
    // Rectangular lattices are conjugation-invariant: eta1 real.
    SpecLattice L13{cplx(0, 1.3)};
    const auto [eta1, eta3] = eta_constants(L13);
    CHECK(std::abs(std::imag(eta1)) < 1e-12);
    CHECK(std::abs(std::real(eta3)) < 1e-12);

    // eta3(2i) against the lattice-sum oracle via the duplication formula,
    // evaluated at tau_spec/4 which lies inside the oracle's Laurent disc.
    SpecLattice L2{cplx(0, 2)};
    oracles::WeierstrassOracle orc(cplx(0, 2));
    const cplx eta3_ref = orc.zeta_duplicated(cplx(0, 0.5));
    CHECK(std::abs(eta_constants(L2).second - eta3_ref) < 1e-10);
}

TEST_CASE("zeta quasi-periods match eta constants") {
    SpecLattice L{cplx(0, 1.4)};
    const auto [eta1, eta3] = eta_constants(L);
    const cplx z{0.23, 0.31};
    CHECK(std::abs(wp_zeta(z + 1.0, L) - wp_zeta(z, L) - 2.0 * eta1) < 1e-11);
    CHECK(std::abs(wp_zeta(z + cplx(0, 1.4), L) - wp_zeta(z, L) - 2.0 * eta3) < 1e-11);
}

TEST_CASE("beta: zero at x, periodicity, dbar equation") {
    HalfLattice L{cplx(0, 1)};
    const cplx x{0.3, 0.1};

    CHECK(std::abs(beta(x, x, L)) < 1e-12);

    const cplx w{0.4, 0.3};
    const cplx b = beta(x, w, L);
    CHECK(std::abs(beta(x, w + 1.0, L) - b) < 1e-11 * std::abs(b));
    CHECK(std::abs(beta(x, w + L.tau, L) - b) < 1e-11 * std::abs(b));

    // dbar beta = (2 pi i/(tau - conj tau)) x beta by central differences.
    const double h = 1e-6;
    const cplx dre = (beta(x, w + h, L) - beta(x, w - h, L)) / (2.0 * h);
    const cplx dim = (beta(x, w + I * h, L) - beta(x, w - I * h, L)) / (2.0 * h);
    const cplx dbar = 0.5 * (dre + I * dim);
    const cplx expect = 2.0 * pi * I / (L.tau - std::conj(L.tau)) * x * b;
    CHECK(std::abs(dbar - expect) < 1e-6);

    // Normalization independence.
    CHECK(std::abs(beta(x, w, L, 2.0) - b) < 1e-13 * std::abs(b));

    CHECK_THROWS_AS(beta(cplx(1.0, 0.0), w, L), domain_error);
}

TEST_CASE("lattice constructors validate their domain") {
    CHECK_THROWS_AS(HalfLattice{cplx(0, -1)}, domain_error);
    CHECK_THROWS_AS(HalfLattice{cplx(0.7, 1)}, domain_error);
    CHECK_THROWS_AS(SpecLattice{cplx(0, 0)}, domain_error);
}

TEST_SUITE_END();
