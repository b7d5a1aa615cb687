#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "whitham/monodromy.hpp"

using namespace whitham;

namespace {

// Closed form for the diagonal (rho = 0) connection: transport along a
// straight segment a -> b is exp(-(alpha dw - chi dwbar)) on the first
// eigenline, the inverse on the second.
Mat2 diagonal_transport_oracle(cplx chi, cplx alpha, cplx a, cplx b) {
    const cplx g = alpha * (b - a) - chi * (std::conj(b) - std::conj(a));
    return Mat2::diag(std::exp(-g), std::exp(g));
}

} // namespace

TEST_SUITE_BEGIN("monodromy");

TEST_CASE("trivial connection transports to the identity") {
    ConnectionPoint P{0.0, 0.0, 0.0, cplx(0, 1)};
    const cplx w0 = 0.5 * (1.0 + P.tau);
    Polyline loop{w0, w0 + 2.0, w0 + 2.0 + 2.0 * P.tau, w0 + 2.0 * P.tau, w0};
    const Mat2 M = parallel_transport(P, loop);
    CHECK(mat_dist(M, Mat2::identity()) < 1e-10);
}

TEST_CASE("diagonal case against the closed-form oracle") {
    const cplx tau{0, 1};
    const cplx chi{0.31, 0.12};
    const cplx alpha{0.27, -0.05};
    ConnectionPoint P{0.0, chi, alpha, tau};
    const cplx w0 = 0.5 * (1.0 + tau);

    const Mat2 M1 = parallel_transport(P, {w0, w0 + 2.0});
    const Mat2 ref = diagonal_transport_oracle(chi, alpha, w0, w0 + 2.0);
    CHECK(mat_dist(M1, ref) < 1e-9 * ref.norm_inf());

    const auto mp = monodromies(P);
    const cplx t1_ref = 2.0 * std::cosh(2.0 * alpha - 2.0 * chi);
    const cplx t2_ref = 2.0 * std::cosh(2.0 * tau * alpha - 2.0 * std::conj(tau) * chi);
    CHECK(std::abs(mp.t1 - t1_ref) < 1e-9 * (1.0 + std::abs(t1_ref)));
    CHECK(std::abs(mp.t2 - t2_ref) < 1e-9 * (1.0 + std::abs(t2_ref)));
}

TEST_CASE("connection form: trace-free, rho factor, scale invariance") {
    const cplx tau{0, 1.2};
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> ur(-0.4, 0.4);
    for (int i = 0; i < 10; ++i) {
        ConnectionPoint P{0.1 + 0.02 * i, cplx(0.4 + ur(rng), ur(rng)),
                          cplx(ur(rng), ur(rng)), tau};
        const cplx w{0.5 + 0.1 * ur(rng), 0.6 + 0.1 * ur(rng)};
        const auto [adw, adwbar] = connection_form(P, w);
        CHECK(std::abs(adw.trace()) < 1e-12);
        CHECK(std::abs(adwbar.trace()) < 1e-12);

        // Theta-normalization invariance, exact up to rounding.
        const auto [adw2, adwbar2] = connection_form(P, w, 2.0);
        CHECK(mat_dist(adw, adw2) < 1e-12 * (1.0 + adw.norm_inf()));
        CHECK(mat_dist(adwbar, adwbar2) < 1e-14);
    }

    // rho = 0 kills the off-diagonal.
    ConnectionPoint P0{0.0, cplx(0.3, 0.1), cplx(0.2, 0.0), tau};
    const auto [adw, adwbar] = connection_form(P0, cplx(0.5, 0.5));
    CHECK(std::abs(adw.b) == 0.0);
    CHECK(std::abs(adw.c) == 0.0);

    CHECK_THROWS_AS(connection_form(P0, cplx(1.0, 1.2)), domain_error); // puncture
}

TEST_CASE("transport: cocycle property and unit determinant") {
    const cplx tau{0, 1};
    ConnectionPoint P{0.12, cplx(0.52, 0.21), cplx(0.47, -0.11), tau};
    const cplx w0 = 0.5 * (1.0 + tau);
    const cplx mid = w0 + 1.0 + 0.3 * I;

    const Mat2 M12 = parallel_transport(P, {w0, mid, w0 + 2.0});
    const Mat2 Ma = parallel_transport(P, {w0, mid});
    const Mat2 Mb = parallel_transport(P, {mid, w0 + 2.0});
    CHECK(mat_dist(M12, Mb * Ma) < 1e-9 * M12.norm_inf());
    CHECK(std::abs(M12.det() - 1.0) < 1e-9);

    const auto mp = monodromies(P);
    CHECK(std::abs(mp.M1.det() - 1.0) < 1e-9);
    CHECK(std::abs(mp.M2.det() - 1.0) < 1e-9);
}

TEST_CASE("monodromy scale invariance and dualization") {
    const cplx tau{0, 1};
    ConnectionPoint P{0.15, cplx(0.52, 0.21), cplx(0.47, -0.11), tau};

    TransportOptions scaled;
    scaled.theta_scale = 2.0;
    const auto mp = monodromies(P);
    const auto mp2 = monodromies(P, scaled);
    CHECK(std::abs(mp.t1 - mp2.t1) < 1e-10 * (1.0 + std::abs(mp.t1)));
    CHECK(std::abs(mp.t2 - mp2.t2) < 1e-10 * (1.0 + std::abs(mp.t2)));

    // Dualizing (chi, alpha) -> (-chi, -alpha) preserves the gauge class,
    // hence the traces.
    ConnectionPoint Pd{P.rho, -P.chi, -P.alpha, tau};
    const auto mpd = monodromies(Pd);
    CHECK(std::abs(mp.t1 - mpd.t1) < 1e-8 * (1.0 + std::abs(mp.t1)));
    CHECK(std::abs(mp.t2 - mpd.t2) < 1e-8 * (1.0 + std::abs(mp.t2)));
}

TEST_CASE("base-point independence of traces") {
    const cplx tau{0, 1};
    ConnectionPoint P{0.1, cplx(0.52, 0.21), cplx(0.45, -0.13), tau};
    const auto mp = monodromies(P);
    const auto mp_shift = monodromies(P, 0.5 * (1.0 + tau) + 0.1, TransportOptions{});
    CHECK(std::abs(mp.t1 - mp_shift.t1) < 1e-8 * (1.0 + std::abs(mp.t1)));
    CHECK(std::abs(mp.t2 - mp_shift.t2) < 1e-8 * (1.0 + std::abs(mp.t2)));
}

TEST_CASE("unitarizability residual and trace test") {
    const cplx tau{0, 1};
    const cplx chi{0.42, 0.17};

    // rho = 0, alpha = conj(chi): unitary flat line bundles, residual ~ 0.
    ConnectionPoint Pu{0.0, chi, std::conj(chi), tau};
    auto [r1, r2] = unitarizability_residual(Pu);
    CHECK(std::abs(r1) < 1e-10);
    CHECK(std::abs(r2) < 1e-10);
    const auto chk = check_unitarizable(Pu);
    CHECK(chk.unitarizable);

    // Perturbed alpha is no longer unitary.
    ConnectionPoint Pp{0.0, chi, std::conj(chi) + 0.1, tau};
    auto [p1, p2] = unitarizability_residual(Pp);
    CHECK((std::abs(p1) > 1e-6 || std::abs(p2) > 1e-6));
    CHECK(!check_unitarizable(Pp).unitarizable);
}

TEST_CASE("path validation") {
    ConnectionPoint P{0.1, cplx(0.52, 0.21), cplx(0.45, -0.13), cplx(0, 1)};
    // Straight through a puncture.
    CHECK_THROWS_AS(parallel_transport(P, {cplx(-0.5, 0.0), cplx(0.5, 0.0)}),
                    domain_error);
    CHECK_THROWS_AS(parallel_transport(P, {cplx(0.5, 0.5)}), domain_error);
}

// Local monodromy class around a puncture (optional, slow: the loop passes
// close to the pole). Trace of the small-loop monodromy on the torus is
// -2 cos(2 pi rho) since the torus loop double-covers the sphere loop.
TEST_CASE("local monodromy conjugacy class" * doctest::skip(true)) {
    const cplx tau{0, 1};
    const double rho = 0.11;
    ConnectionPoint P{rho, cplx(0.52, 0.21), cplx(0.45, -0.13), tau};
    const double rad = 0.08;
    Polyline loop;
    const int segs = 24;
    for (int k = 0; k <= segs; ++k)
        loop.push_back(rad * std::exp(2.0 * pi * I * double(k) / double(segs)));
    TransportOptions opts;
    opts.delta_path = rad * 0.7;
    const Mat2 M = parallel_transport(P, loop, opts);
    CHECK(std::abs(M.trace() - (-2.0 * std::cos(2.0 * pi * rho))) < 1e-5);
}

TEST_SUITE_END();
