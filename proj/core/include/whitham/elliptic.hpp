#ifndef WHITHAM_ELLIPTIC_HPP
#define WHITHAM_ELLIPTIC_HPP

#include "whitham/types.hpp"

namespace whitham {

/// Lattice Z + tau*Z carrying the theta function of the domain torus.
/// Standing assumption: Im(tau) > 0 and |Re(tau)| < 1/2.
struct HalfLattice {
    cplx tau;

    explicit HalfLattice(cplx tau_) : tau(tau_) {
        if (!(tau.imag() > 0.0))
            throw domain_error("HalfLattice: Im(tau) must be positive");
        if (!(std::abs(tau.real()) < 0.5))
            throw domain_error("HalfLattice: |Re(tau)| must be < 1/2");
    }
};

/// Lattice Z + tau_spec*Z of a genus-1 spectral curve. Rectangular flows
/// use purely imaginary tau_spec; evaluation only needs Im(tau_spec) > 0.
struct SpecLattice {
    cplx tau_spec;

    explicit SpecLattice(cplx ts) : tau_spec(ts) {
        if (!(ts.imag() > 0.0))
            throw domain_error("SpecLattice: Im(tau_spec) must be positive");
    }
};

/// Theta function of Z + tau*Z normalized as the Fourier series
///     theta(w) = sum_n (-1)^n q^(n(n-1)) e^(2 pi i n w),   q = e^(i pi tau),
/// the entire function with theta(0) = 0,
///     theta(w+1) = theta(w),  theta(w+tau) = -theta(w) e^(-2 pi i w).
/// `scale` multiplies the normalization; it exists so tests can verify that
/// downstream quantities are independent of the choice.
cplx theta(cplx w, const HalfLattice& L, double scale = 1.0);

/// theta'(0); scales linearly with the normalization constant.
cplx theta_deriv0(const HalfLattice& L, double scale = 1.0);

/// Weierstrass P function of Z + tau_spec*Z. At a lattice point returns the
/// distinguished infinite value (inf, inf) instead of throwing.
cplx wp(cplx z, const SpecLattice& L);

/// Derivative P'(z), same pole signaling.
cplx wp_prime(cplx z, const SpecLattice& L);

/// Weierstrass zeta function: -zeta' = P, zeta(z) - 1/z -> 0 at 0.
/// Quasi-periodic: zeta(z+1) = zeta(z) + 2 eta1, zeta(z+tau) = zeta(z) + 2 eta3.
cplx wp_zeta(cplx z, const SpecLattice& L);

/// (eta1, eta3) = (zeta(1/2), zeta(tau_spec/2)). They satisfy the Legendre
/// relation eta1*tau_spec/2 - eta3/2 = pi*i/2; eta3 is evaluated
/// independently so the relation stays a meaningful test.
std::pair<cplx, cplx> eta_constants(const SpecLattice& L);

/// Half-period values e1 = P(1/2), e2 = P((1+tau)/2), e3 = P(tau/2).
struct HalfPeriodValues {
    cplx e1, e2, e3;
};
HalfPeriodValues half_period_values(const SpecLattice& L);

/// Meromorphic section
///     beta_x(w) = theta(w-x)/theta(w) * exp(2 pi i/(conj(tau)-tau) * x * (w - conj(w)))
/// of the holomorphic structure dbar - 2 pi i/(tau - conj(tau)) x dwbar on
/// C/(Z+tau*Z): doubly periodic in w, simple zero at w = x, simple pole at
/// w = 0. Independent of the theta normalization.
cplx beta(cplx x, cplx w, const HalfLattice& L, double scale = 1.0);

namespace detail {

/// theta and derivatives up to order `order` (<= 3) at w, with argument
/// reduction to the fundamental strip and exact quasi-periodicity factors.
struct ThetaJet {
    cplx f[4]; // theta, theta', theta'', theta'''
};
ThetaJet theta_jet(cplx w, cplx tau, int order, double scale = 1.0);

/// Distance from z to the nearest point of Z + tau*Z.
double lattice_distance(cplx z, cplx tau);

} // namespace detail

} // namespace whitham

#endif
