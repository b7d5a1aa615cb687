#ifndef WHITHAM_MONODROMY_HPP
#define WHITHAM_MONODROMY_HPP

#include "whitham/elliptic.hpp"
#include "whitham/moduli.hpp"
#include "whitham/types.hpp"

namespace whitham {

/// A point (rho, chi, alpha) of the affine moduli space over Jac(T^2),
/// determining the flat sl(2,C) connection 1-form on the 4-punctured torus
///
///   d + [ -chi dwbar + alpha dw    rho t'(0)/t(-2x) beta_{2x}(w) dw  ]
///       [ rho t'(0)/t(2x) beta_{-2x}(w) dw    chi dwbar - alpha dw  ]
///
/// with x = (tau - conj tau)/(2 pi i) * chi and t the theta function.
/// Punctures sit at the lattice Z + tau Z (the points [0],[1],[1+tau],[tau]
/// of T^2 = C/(2Z + 2 tau Z)).
struct ConnectionPoint {
    double rho;
    cplx chi;
    cplx alpha;
    cplx tau;
};

struct MonodromyPair {
    Mat2 M1, M2; // transports along w0 -> w0+2 and w0 -> w0+2 tau
    cplx t1, t2;
};

struct TransportOptions {
    double rtol = 1e-11;
    double atol = 1e-13;
    double delta_path = 0.05; // required distance of paths from punctures
    double theta_scale = 1.0; // normalization hook, results must not depend on it
};

/// Connection 1-form coefficients at w: returns (A_dw, A_dwbar), both
/// trace-free. Throws near punctures (< 1e-6 lattice distance) and when chi
/// lies on the Jacobian lattice (off-diagonal degenerates).
std::pair<Mat2, Mat2> connection_form(const ConnectionPoint& P, cplx w,
                                      double theta_scale = 1.0);

/// Parallel transport of d + A along a polyline: the solution F(end) of
/// F' = -A(w(t)) . F, F(start) = Id. Adaptive embedded Runge-Kutta (5th
/// order with 4th-order error control), relative tolerance opts.rtol.
Mat2 parallel_transport(const ConnectionPoint& P, const Polyline& path,
                        const TransportOptions& opts = {});

/// Monodromies along the torus generators from base point w0. The default
/// w0 = (1+tau)/2 keeps both straight segments away from the punctures.
MonodromyPair monodromies(const ConnectionPoint& P,
                          const TransportOptions& opts = {});
MonodromyPair monodromies(const ConnectionPoint& P, cplx base_point,
                          const TransportOptions& opts = {});

/// (Im t1, Im t2): the unitarizability residual driven to zero by the
/// Mehta-Seshadri solver.
std::pair<double, double> unitarizability_residual(const ConnectionPoint& P,
                                                   const TransportOptions& opts = {});

/// Necessary-and-sufficient trace test: both traces real (to 1e-8) and in
/// the closed interval [-2, 2]. `boundary` reports |t| within 1e-8 of 2.
struct UnitarizabilityCheck {
    bool unitarizable;
    bool boundary;
    cplx t1, t2;
};
UnitarizabilityCheck check_unitarizable(const ConnectionPoint& P,
                                        const TransportOptions& opts = {});

namespace detail {

/// Cached evaluator of the connection coefficients; safe to share between
/// stages of one transport.
class ConnectionEval {
public:
    ConnectionEval(const ConnectionPoint& P, double theta_scale = 1.0);

    /// A(w, wdot) = A_dw(w) * wdot + A_dwbar(w) * conj(wdot).
    Mat2 eval(cplx w, cplx wdot) const;

    std::pair<Mat2, Mat2> coefficients(cplx w) const;

    const ConnectionPoint& point() const { return P_; }

private:
    ConnectionPoint P_;
    HalfLattice L_;
    bool diagonal_;
    cplx x2_;        // 2x
    cplx konst_up_;  // rho theta'(0)/theta(-2x)
    cplx konst_dn_;  // rho theta'(0)/theta(2x)
    cplx cexp_;      // 2 pi i/(conj tau - tau) * 2x  (beta exponent)
    double scale_;
};

double segment_lattice_distance(cplx a, cplx b, cplx tau);

} // namespace detail

} // namespace whitham

#endif
