#ifndef WHITHAM_MEHTA_SESHADRI_HPP
#define WHITHAM_MEHTA_SESHADRI_HPP

#include <span>
#include <vector>

#include "whitham/monodromy.hpp"
#include "whitham/types.hpp"

namespace whitham {

/// Result of one Mehta-Seshadri solve.
struct MSSolve {
    cplx alpha;
    int iterations = 0;
    double residual_norm = 0.0;
    bool boundary_flag = false; // a trace within 1e-8 of +-2
};

struct MSOptions {
    double tol = 1e-11;           // Newton stopping residual (inf norm)
    double success_tol = 1e-8;    // contract: residual below this on return
    int max_iterations = 50;
    double fd_step = 1e-6;        // relative central-difference step
    int max_halvings = 8;
    double lattice_guard = 1e-6;  // refuse chi closer to the lattice
    double rho_ladder_step = 0.02;
    TransportOptions transport{};
};

/// Solve for the unique alpha near `seed` making the monodromy pair of
/// (rho, chi, alpha) unitarizable: a damped 2-real-dimensional Newton on
/// (Im t1, Im t2) with central-difference Jacobian.
MSSolve ms_alpha(double rho, cplx chi, cplx tau, cplx seed,
                 const MSOptions& opts = {});

/// Seed for ms_alpha with no prior information: the exact rho = 0 solution
/// conj(chi) continued in rho steps of opts.rho_ladder_step. Deterministic;
/// used for cold starts and replay.
MSSolve ms_alpha_ladder(double rho, cplx chi, cplx tau, const MSOptions& opts = {});

/// Per-sample ms_alpha along a sequence of chi samples. A sequential seeding
/// pass (solution at sample j seeds j+1, the first seed from the rho ladder)
/// at relaxed tolerance, then an embarrassingly parallel refinement pass at
/// full tolerance. Any failure aborts with the failing index in the message.
std::vector<cplx> ms_alpha_circle(double rho, std::span<const cplx> chis, cplx tau,
                                  const MSOptions& opts = {});

/// Residue estimate of the section alpha^u at a Jacobian lattice point gamma
/// from a contour |chi - gamma| = eps: mean of (chi - gamma) alpha^u(chi)
/// over the contour, seeded by radius continuation from a large circle.
/// The magnitude matches 4 pi rho / |tau - conj tau| within O(eps) and the
/// sign encodes parabolic stability.
cplx ms_residue_probe(double rho, cplx tau, cplx gamma, double eps,
                      const MSOptions& opts = {});

} // namespace whitham

#endif
