#ifndef WHITHAM_MODULI_HPP
#define WHITHAM_MODULI_HPP

#include <vector>

#include "whitham/elliptic.hpp"
#include "whitham/types.hpp"

namespace whitham {

/// Domain torus T^2 = C/(2Z + 2 tau Z) together with the generators of the
/// Jacobian lattice in the dwbar-trivialization,
///   Lambda = (pi i/(tau - conj tau)) Z + (pi i tau/(tau - conj tau)) Z.
struct TorusModulus {
    cplx tau;
    cplx jac_gen1, jac_gen2;

    explicit TorusModulus(cplx tau_);
};

/// Generators of the Jacobian lattice for modulus tau.
std::pair<cplx, cplx> jacobian_lattice(cplx tau);

/// Representative of chi in the fundamental parallelogram (coefficients in
/// [-1/2, 1/2) w.r.t. the generators) and a flag marking lattice points
/// within tolerance 1e-10.
std::pair<cplx, bool> reduce_mod_lattice(cplx chi, cplx tau);

/// The Sym coset representative gamma_sym = pi i (1 + tau) / (2 (tau - conj tau)),
/// i.e. (gen1 + gen2)/2.
cplx sym_target(cplx tau);

enum class CurveKind { genus0, genus1 };

/// Spectral curve: genus 0 (lambda = xi^2 on CP^1) or genus 1
/// (Sigma = C/(Z + tau_spec Z) with the degree-2 map lambda determined by
/// branch values 0, r, 1/r, infinity over [0], [1/2], [(1+tau_spec)/2],
/// [tau_spec/2]).
struct SpectralCurve {
    CurveKind kind = CurveKind::genus0;
    cplx tau_spec{0.0, 0.0};
    double r = 0.0; // branch value in (0,1), genus 1 only

    // Cached genus-1 data: half-period values, the scale c of
    // lambda = c/(wp - e3), and sqrt(c) fixing the sign of y.
    cplx e1{}, e2{}, e3{};
    double c = 0.0;
    double sqrt_c = 0.0;
    cplx eta1{}, eta3{};
    int winding = 1; // orientation of lambda along C+

    static SpectralCurve make_genus0();
    static SpectralCurve make_genus1(cplx tau_spec);
};

/// lambda(xi) for a genus-1 curve; [tau_spec/2] maps to the infinite marker.
cplx genus1_lambda(cplx xi, const SpectralCurve& curve);

/// dlambda/dxi.
cplx genus1_lambda_prime(cplx xi, const SpectralCurve& curve);

/// The odd function y with y^2 = lambda (lambda - r)(lambda - 1/r),
/// fixed as y = lambda' / (2 sqrt(c)).
cplx genus1_y(cplx xi, const SpectralCurve& curve);

/// Points xi_j with lambda(xi_j) on the unit circle: genus 0 the N-th roots
/// of unity, genus 1 the component C+ = { j/N + tau_spec/4 }.
std::vector<cplx> circle_samples(const SpectralCurve& curve, int N);

} // namespace whitham

#endif
