#include "whitham/moduli.hpp"

#include <cmath>
#include <limits>

namespace whitham {

std::pair<cplx, cplx> jacobian_lattice(cplx tau) {
    if (!(tau.imag() > 0.0))
        throw domain_error("jacobian_lattice: Im(tau) must be positive");
    const cplx d = tau - std::conj(tau);
    return {pi * I / d, pi * I * tau / d};
}

TorusModulus::TorusModulus(cplx tau_) : tau(tau_) {
    auto [g1, g2] = jacobian_lattice(tau_);
    jac_gen1 = g1;
    jac_gen2 = g2;
}

std::pair<cplx, bool> reduce_mod_lattice(cplx chi, cplx tau) {
    auto [g1, g2] = jacobian_lattice(tau);
    // Solve chi = u g1 + v g2 over the reals.
    const double det = g1.real() * g2.imag() - g2.real() * g1.imag();
    const double u = (chi.real() * g2.imag() - g2.real() * chi.imag()) / det;
    const double v = (g1.real() * chi.imag() - chi.real() * g1.imag()) / det;
    // Coefficients of the representative lie in (-1/2, 1/2].
    const double m = std::ceil(u - 0.5);
    const double n = std::ceil(v - 0.5);
    const cplx reduced = chi - m * g1 - n * g2;
    return {reduced, std::abs(reduced) < 1e-10};
}

cplx sym_target(cplx tau) {
    auto [g1, g2] = jacobian_lattice(tau);
    return 0.5 * (g1 + g2);
}

SpectralCurve SpectralCurve::make_genus0() { return {}; }

SpectralCurve SpectralCurve::make_genus1(cplx tau_spec) {
    SpectralCurve cv;
    cv.kind = CurveKind::genus1;
    cv.tau_spec = tau_spec;
    SpecLattice L{tau_spec};
    const auto hp = half_period_values(L);
    cv.e1 = hp.e1;
    cv.e2 = hp.e2;
    cv.e3 = hp.e3;
    const cplx cc = (hp.e1 - hp.e3) * (hp.e2 - hp.e3);
    if (!(cc.real() > 0.0) || std::abs(cc.imag()) > 1e-8 * std::abs(cc))
        throw domain_error("SpectralCurve: non-rectangular branch data");
    cv.c = std::sqrt(cc.real()); // lambda = c/(wp - e3)
    cv.sqrt_c = std::sqrt(cv.c);
    const cplx rr = (hp.e2 - hp.e3) / (hp.e1 - hp.e3);
    cv.r = std::sqrt(rr.real());
    if (!(cv.r > 0.0 && cv.r < 1.0))
        throw domain_error("SpectralCurve: branch value r outside (0,1)");
    auto etas = eta_constants(L);
    cv.eta1 = etas.first;
    cv.eta3 = etas.second;

    // Orientation of lambda along C+ (winding of s -> lambda(s + tau_spec/4)).
    const int N = 64;
    double total = 0.0;
    cplx prev = genus1_lambda(tau_spec / 4.0, cv);
    for (int j = 1; j <= N; ++j) {
        const cplx lam = genus1_lambda(double(j) / N + tau_spec / 4.0, cv);
        total += std::arg(lam / prev);
        prev = lam;
    }
    cv.winding = total > 0.0 ? 1 : -1;
    return cv;
}

cplx genus1_lambda(cplx xi, const SpectralCurve& curve) {
    if (curve.kind != CurveKind::genus1)
        throw domain_error("genus1_lambda: curve is not genus 1");
    SpecLattice L{curve.tau_spec};
    if (detail::lattice_distance(xi - curve.tau_spec / 2.0, curve.tau_spec) < 1e-12) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    return curve.c / (wp(xi, L) - curve.e3);
}

cplx genus1_lambda_prime(cplx xi, const SpectralCurve& curve) {
    SpecLattice L{curve.tau_spec};
    const cplx den = wp(xi, L) - curve.e3;
    return -curve.c * wp_prime(xi, L) / (den * den);
}

cplx genus1_y(cplx xi, const SpectralCurve& curve) {
    return genus1_lambda_prime(xi, curve) / (2.0 * curve.sqrt_c);
}

std::vector<cplx> circle_samples(const SpectralCurve& curve, int N) {
    if (N < 8 || N % 2 != 0)
        throw domain_error("circle_samples: N must be even and >= 8");
    std::vector<cplx> xs(N);
    if (curve.kind == CurveKind::genus0) {
        for (int j = 0; j < N; ++j)
            xs[j] = std::exp(2.0 * pi * I * double(j) / double(N));
    } else {
        for (int j = 0; j < N; ++j)
            xs[j] = double(j) / double(N) + curve.tau_spec / 4.0;
    }
    return xs;
}

} // namespace whitham
