#include "whitham/elliptic.hpp"

#include <cmath>
#include <limits>

namespace whitham {

namespace detail {

double lattice_distance(cplx z, cplx tau) {
    // Coefficients of z in the (1, tau) basis.
    const double v = z.imag() / tau.imag();
    const double u = z.real() - v * tau.real();
    const double fu = u - std::round(u);
    const double fv = v - std::round(v);
    // Nearest point may sit in a neighbouring cell; check the 3x3 block.
    double best = std::numeric_limits<double>::max();
    for (int m = -1; m <= 1; ++m)
        for (int n = -1; n <= 1; ++n) {
            const cplx p = (fu - m) + (fv - n) * tau;
            best = std::min(best, std::abs(p));
        }
    return best;
}

ThetaJet theta_jet(cplx w, cplx tau, int order, double scale) {
    // Reduce w = w0 + k + m*tau with |Im w0| <= Im(tau)/2, |Re w0| <= 1/2.
    const long m = std::lround(w.imag() / tau.imag());
    cplx w0 = w - double(m) * tau;
    w0 -= std::round(w0.real());

    const cplx q = std::exp(I * pi * tau);
    if (std::abs(q) > 0.9)
        throw domain_error("theta: |q| too close to 1 (Im(tau) too small)");

    // theta^(k)(w0) by summation in n/(1-n) pairs; the shared exponent is
    // q^(n(n-1)) and terms decay like |q|^(n^2-2n).
    const cplx e = std::exp(2.0 * pi * I * w0);
    const cplx einv = 1.0 / e;
    cplx s[4] = {0.0, 0.0, 0.0, 0.0};
    cplx qpow = 1.0;   // q^(n(n-1))
    cplx q2n = q * q;  // q^(2n)
    cplx ep = e;       // e^(2 pi i n w0)
    cplx em = 1.0;     // e^(2 pi i (1-n) w0)
    for (int n = 1; n <= 64; ++n) {
        const cplx tp = qpow * ep;
        const cplx tm = qpow * em;
        const double sn = (n % 2 == 0) ? 1.0 : -1.0;
        cplx dp = 1.0, dm = 1.0;
        for (int k = 0; k <= order; ++k) {
            s[k] += sn * (dp * tp - dm * tm);
            dp *= 2.0 * pi * I * double(n);
            dm *= 2.0 * pi * I * double(1 - n);
        }
        if (n >= 2 && std::abs(tp) + std::abs(tm) < 1e-18 * (1.0 + std::abs(s[0])))
            break;
        qpow *= q2n;
        q2n *= q * q;
        ep *= e;
        em *= einv;
    }

    // theta^(k)(w) = E * sum_j C(k,j) g^j theta^(k-j)(w0) with
    // E = (-1)^m exp(-2 pi i m w0 - i pi tau m(m-1)), g = -2 pi i m.
    cplx E = std::exp(-2.0 * pi * I * double(m) * w0 - I * pi * tau * double(m) * double(m - 1));
    if (m % 2 != 0) E = -E;
    E *= scale;

    const cplx g = -2.0 * pi * I * double(m);
    ThetaJet out;
    out.f[0] = E * s[0];
    out.f[1] = E * (s[1] + g * s[0]);
    out.f[2] = E * (s[2] + 2.0 * g * s[1] + g * g * s[0]);
    out.f[3] = E * (s[3] + 3.0 * g * s[2] + 3.0 * g * g * s[1] + g * g * g * s[0]);
    return out;
}

namespace {

// Derivatives of theta at 0 from the paired series (theta(0) = 0 exactly).
void theta0_derivs(cplx tau, cplx& d1, cplx& d2, cplx& d3) {
    const cplx q = std::exp(I * pi * tau);
    d1 = d2 = d3 = 0.0;
    cplx qpow = 1.0;    // q^(n(n-1))
    cplx q2n = q * q;   // q^(2n)
    for (int n = 1; n <= 64; ++n) {
        const double sn = (n % 2 == 0) ? 1.0 : -1.0;
        const cplx cn = 2.0 * pi * I * double(n);
        const cplx cm = 2.0 * pi * I * double(1 - n);
        d1 += sn * qpow * (cn - cm);
        d2 += sn * qpow * (cn * cn - cm * cm);
        d3 += sn * qpow * (cn * cn * cn - cm * cm * cm);
        if (std::abs(qpow) < 1e-20) break;
        qpow *= q2n;
        q2n *= q * q;
    }
}

// eta1 of Z + tau*Z via the odd part P(w) = theta(w) e^(-i pi w):
// eta1 = -P'''(0) / (6 P'(0)). Memoized per thread; the flow evaluates
// thousands of zeta calls on one lattice.
cplx eta1_of(cplx tau) {
    thread_local cplx cached_tau{0.0, 0.0};
    thread_local cplx cached_eta1{0.0, 0.0};
    if (tau == cached_tau) return cached_eta1;
    cplx d1, d2, d3;
    theta0_derivs(tau, d1, d2, d3);
    const cplx p1 = d1;
    const cplx p3 = d3 - 3.0 * (I * pi) * d2 - 3.0 * pi * pi * d1;
    cached_tau = tau;
    cached_eta1 = -p3 / (6.0 * p1);
    return cached_eta1;
}

constexpr double kPoleTol = 1e-12;

} // namespace
} // namespace detail

cplx theta(cplx w, const HalfLattice& L, double scale) {
    return detail::theta_jet(w, L.tau, 0, scale).f[0];
}

cplx theta_deriv0(const HalfLattice& L, double scale) {
    cplx d1, d2, d3;
    detail::theta0_derivs(L.tau, d1, d2, d3);
    return scale * d1;
}

cplx wp(cplx z, const SpecLattice& L) {
    const cplx tau = L.tau_spec;
    if (detail::lattice_distance(z, tau) < detail::kPoleTol) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    const auto j = detail::theta_jet(z, tau, 2);
    const cplx r1 = j.f[1] / j.f[0];
    const cplx psi1 = j.f[2] / j.f[0] - r1 * r1;
    return -2.0 * detail::eta1_of(tau) - psi1;
}

cplx wp_prime(cplx z, const SpecLattice& L) {
    const cplx tau = L.tau_spec;
    if (detail::lattice_distance(z, tau) < detail::kPoleTol) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    const auto j = detail::theta_jet(z, tau, 3);
    const cplx r1 = j.f[1] / j.f[0];
    const cplx psi2 = j.f[3] / j.f[0] - 3.0 * (j.f[2] / j.f[0]) * r1 + 2.0 * r1 * r1 * r1;
    return -psi2;
}

cplx wp_zeta(cplx z, const SpecLattice& L) {
    const cplx tau = L.tau_spec;
    if (detail::lattice_distance(z, tau) < detail::kPoleTol) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    const auto j = detail::theta_jet(z, tau, 1);
    return 2.0 * detail::eta1_of(tau) * z + j.f[1] / j.f[0] - I * pi;
}

std::pair<cplx, cplx> eta_constants(const SpecLattice& L) {
    const cplx eta1 = detail::eta1_of(L.tau_spec);
    const cplx eta3 = wp_zeta(L.tau_spec / 2.0, L);
    return {eta1, eta3};
}

HalfPeriodValues half_period_values(const SpecLattice& L) {
    const cplx ts = L.tau_spec;
    return {wp(0.5, L), wp(0.5 * (1.0 + ts), L), wp(0.5 * ts, L)};
}

cplx beta(cplx x, cplx w, const HalfLattice& L, double scale) {
    if (detail::lattice_distance(x, L.tau) < 1e-10)
        throw domain_error("beta: x on the lattice, section degenerates");
    const cplx num = theta(w - x, L, scale);
    const cplx den = theta(w, L, scale);
    const cplx tbar = std::conj(L.tau);
    const cplx ex = std::exp(2.0 * pi * I / (tbar - L.tau) * x * (w - std::conj(w)));
    return num / den * ex;
}

} // namespace whitham
