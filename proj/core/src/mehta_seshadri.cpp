#include "whitham/mehta_seshadri.hpp"

#include <cmath>
#include <string>

#include "whitham/parallel.hpp"

namespace whitham {

namespace {

// Imaginary parts of the generator traces plus the mixed trace tr(M2 M1).
// The pair (Im t1, Im t2) is the contract residual, but it vanishes
// identically along the conjugation-fixed loci of Jac(T^2) (e.g. real chi on
// rectangular tori), where only the mixed trace isolates the unitarizable
// root. The solver therefore runs Gauss-Newton on all three components; the
// mixed trace costs nothing since both monodromies are in hand.
struct Residual {
    double r1, r2, r3;
    cplx t1, t2, t12;
    double norm() const {
        return std::max(std::abs(r3), std::max(std::abs(r1), std::abs(r2)));
    }
};

Residual residual_at(double rho, cplx chi, cplx tau, cplx alpha,
                     const TransportOptions& topts) {
    const MonodromyPair mp = monodromies(ConnectionPoint{rho, chi, alpha, tau}, topts);
    const cplx t12 = (mp.M2 * mp.M1).trace();
    return {mp.t1.imag(), mp.t2.imag(), t12.imag(), mp.t1, mp.t2, t12};
}

void guard_chi(cplx chi, cplx tau, double guard) {
    auto [red, flag] = reduce_mod_lattice(chi, tau);
    if (std::abs(red) < guard)
        throw domain_error("ms_alpha: chi within the lattice guard distance");
}

// Nearest-lattice decomposition lambda = a g1 + b g2 (a, b integers).
std::pair<long, long> lattice_coeffs(cplx lambda, cplx tau) {
    auto [g1, g2] = jacobian_lattice(tau);
    const double det = g1.real() * g2.imag() - g2.real() * g1.imag();
    const double u = (lambda.real() * g2.imag() - g2.real() * lambda.imag()) / det;
    const double v = (g1.real() * lambda.imag() - lambda.real() * g1.imag()) / det;
    return {std::lround(u), std::lround(v)};
}

// The affine equivariance of the section: shifting chi by a g1 + b g2 shifts
// alpha by a conj(g1) + b conj(g2) (conj(g1) = g1). Consequences on the
// conjugation-fixed loci of a rectangular torus:
//   conj(chi) = chi + L  =>  Im(alpha) pinned, alpha varies along R,
//   conj(chi) = -chi + L =>  Re(alpha) pinned, alpha varies along iR.
// On those loci Im t1 and Im t2 vanish identically and only the mixed trace
// isolates the root, so the solve drops to one real unknown.
struct LocusInfo {
    bool plus = false, minus = false;
    double pinned_im = 0.0; // valid when plus
    double pinned_re = 0.0; // valid when minus
};

LocusInfo detect_locus(cplx chi, cplx tau) {
    LocusInfo info;
    if (std::abs(tau.real()) > 1e-12) return info; // rectangular tori only
    auto [g1, g2] = jacobian_lattice(tau);
    constexpr double tol = 1e-9;

    auto [rp, fp] = reduce_mod_lattice(std::conj(chi) - chi, tau);
    if (fp || std::abs(rp) < tol) {
        const auto [a, b] = lattice_coeffs(std::conj(chi) - chi, tau);
        const cplx shift = double(a) * g1 + double(b) * std::conj(g2);
        // conj(alpha) - alpha = shift is purely imaginary: -2 Im(alpha) = Im(shift).
        info.plus = std::abs(shift.real()) < 1e-10;
        info.pinned_im = -shift.imag() / 2.0;
    }
    auto [rm, fm] = reduce_mod_lattice(std::conj(chi) + chi, tau);
    if (fm || std::abs(rm) < tol) {
        const auto [a, b] = lattice_coeffs(std::conj(chi) + chi, tau);
        const cplx shift = double(a) * g1 + double(b) * std::conj(g2);
        // conj(alpha) + alpha = shift is purely real.
        info.minus = std::abs(shift.imag()) < 1e-10;
        info.pinned_re = shift.real() / 2.0;
    }
    return info;
}

} // namespace

namespace {

// Constrained solve on a conjugation-fixed locus: one real unknown along
// `dir`, driven by the mixed-trace residual (the generator traces are real
// by symmetry there).
MSSolve ms_alpha_on_locus(double rho, cplx chi, cplx tau, cplx alpha0, cplx dir,
                          const MSOptions& opts) {
    double s = 0.0;
    Residual res = residual_at(rho, chi, tau, alpha0, opts.transport);
    int iter = 0;
    while (res.norm() > opts.tol && iter < opts.max_iterations) {
        const double h = opts.fd_step * std::max(1.0, std::abs(alpha0) + std::abs(s));
        const Residual rp = residual_at(rho, chi, tau, alpha0 + (s + h) * dir, opts.transport);
        const Residual rm = residual_at(rho, chi, tau, alpha0 + (s - h) * dir, opts.transport);
        const double d3 = (rp.r3 - rm.r3) / (2 * h);
        if (std::abs(d3) < 1e-300)
            throw solve_error("ms_alpha: singular locus derivative", res.norm());
        const double step = -res.r3 / d3;
        double damp = 1.0;
        Residual next = res;
        int halvings = 0;
        for (; halvings <= opts.max_halvings; ++halvings) {
            next = residual_at(rho, chi, tau, alpha0 + (s + damp * step) * dir,
                               opts.transport);
            if (next.norm() < res.norm() || next.norm() <= opts.tol) break;
            damp *= 0.5;
        }
        if (halvings > opts.max_halvings)
            throw solve_error("ms_alpha: locus line search stalled", res.norm());
        s += damp * step;
        res = next;
        ++iter;
    }
    if (res.norm() > opts.success_tol)
        throw solve_error("ms_alpha: no convergence (locus solve)", res.norm());
    const double m12 = std::abs(res.t12.real());
    const double mx = std::max({std::abs(res.t1.real()), std::abs(res.t2.real()), m12});
    if (mx > 2.0 + 1e-6)
        throw solve_error("ms_alpha: converged to a non-unitarizable root (|trace| > 2)",
                          mx - 2.0);
    MSSolve out;
    out.alpha = alpha0 + s * dir;
    out.iterations = iter;
    out.residual_norm = res.norm();
    out.boundary_flag = std::abs(std::abs(res.t1.real()) - 2.0) <= 1e-8 ||
                        std::abs(std::abs(res.t2.real()) - 2.0) <= 1e-8;
    return out;
}

} // namespace

MSSolve ms_alpha(double rho, cplx chi, cplx tau, cplx seed, const MSOptions& opts) {
    if (!(std::abs(rho) < 0.5))
        throw domain_error("ms_alpha: |rho| must be < 1/2");
    guard_chi(chi, tau, opts.lattice_guard);

    const LocusInfo locus = detect_locus(chi, tau);
    if (locus.plus && locus.minus) {
        // Spin-class chi: alpha fully pinned by the two reflections.
        const cplx alpha{locus.pinned_re, locus.pinned_im};
        const Residual res = residual_at(rho, chi, tau, alpha, opts.transport);
        if (res.norm() > opts.success_tol)
            throw solve_error("ms_alpha: pinned spin-point alpha has nonzero residual",
                              res.norm());
        MSSolve out;
        out.alpha = alpha;
        out.residual_norm = res.norm();
        out.boundary_flag = std::abs(std::abs(res.t1.real()) - 2.0) <= 1e-8 ||
                            std::abs(std::abs(res.t2.real()) - 2.0) <= 1e-8;
        return out;
    }
    if (locus.plus)
        return ms_alpha_on_locus(rho, chi, tau,
                                 cplx(seed.real(), locus.pinned_im), cplx(1.0, 0.0), opts);
    if (locus.minus)
        return ms_alpha_on_locus(rho, chi, tau,
                                 cplx(locus.pinned_re, seed.imag()), cplx(0.0, 1.0), opts);

    cplx alpha = seed;
    Residual res = residual_at(rho, chi, tau, alpha, opts.transport);
    int iter = 0;
    double J[3][2] = {};
    bool have_jacobian = false;

    while (res.norm() > opts.tol && iter < opts.max_iterations) {
        if (!have_jacobian || iter % 4 == 0) {
            const double h = opts.fd_step * std::max(1.0, std::abs(alpha));
            const Residual rp = residual_at(rho, chi, tau, alpha + h, opts.transport);
            const Residual rm = residual_at(rho, chi, tau, alpha - h, opts.transport);
            const Residual ip = residual_at(rho, chi, tau, alpha + I * h, opts.transport);
            const Residual im = residual_at(rho, chi, tau, alpha - I * h, opts.transport);
            J[0][0] = (rp.r1 - rm.r1) / (2 * h);
            J[1][0] = (rp.r2 - rm.r2) / (2 * h);
            J[2][0] = (rp.r3 - rm.r3) / (2 * h);
            J[0][1] = (ip.r1 - im.r1) / (2 * h);
            J[1][1] = (ip.r2 - im.r2) / (2 * h);
            J[2][1] = (ip.r3 - im.r3) / (2 * h);
            have_jacobian = true;
        }
        // Gauss-Newton step: solve the 2x2 normal equations.
        const double r[3] = {res.r1, res.r2, res.r3};
        double n11 = 0, n12 = 0, n22 = 0, g1 = 0, g2 = 0;
        for (int i = 0; i < 3; ++i) {
            n11 += J[i][0] * J[i][0];
            n12 += J[i][0] * J[i][1];
            n22 += J[i][1] * J[i][1];
            g1 += J[i][0] * r[i];
            g2 += J[i][1] * r[i];
        }
        const double det = n11 * n22 - n12 * n12;
        if (std::abs(det) < 1e-300)
            throw solve_error("ms_alpha: singular Jacobian", res.norm());
        const double dx = (-g1 * n22 + g2 * n12) / det;
        const double dy = (-n11 * g2 + n12 * g1) / det;
        cplx step{dx, dy};

        double damp = 1.0;
        Residual next = res;
        int halvings = 0;
        for (; halvings <= opts.max_halvings; ++halvings) {
            next = residual_at(rho, chi, tau, alpha + damp * step, opts.transport);
            if (next.norm() < res.norm() || next.norm() <= opts.tol) break;
            damp *= 0.5;
        }
        if (halvings > opts.max_halvings)
            throw solve_error("ms_alpha: line search stalled", res.norm());
        if (halvings > 0) have_jacobian = false;
        alpha += damp * step;
        res = next;
        ++iter;
    }

    if (res.norm() > opts.success_tol)
        throw solve_error("ms_alpha: no convergence after " + std::to_string(iter) +
                              " iterations",
                          res.norm());

    constexpr double btol = 1e-8;
    const double m1 = std::abs(res.t1.real()), m2 = std::abs(res.t2.real());
    const double m12 = std::abs(res.t12.real());
    if (std::max({m1, m2, m12}) > 2.0 + 1e-6)
        throw solve_error("ms_alpha: converged to a non-unitarizable root (|trace| > 2)",
                          std::max({m1, m2, m12}) - 2.0);
    MSSolve out;
    out.alpha = alpha;
    out.iterations = iter;
    out.residual_norm = res.norm();
    out.boundary_flag = std::abs(m1 - 2.0) <= btol || std::abs(m2 - 2.0) <= btol;
    return out;
}

MSSolve ms_alpha_ladder(double rho, cplx chi, cplx tau, const MSOptions& opts) {
    cplx alpha = std::conj(chi); // exact at rho = 0
    if (rho == 0.0) return ms_alpha(0.0, chi, tau, alpha, opts);
    const double step = opts.rho_ladder_step;
    const int n = std::max(1, int(std::ceil(std::abs(rho) / step)));
    MSSolve sol;
    for (int k = 1; k <= n; ++k) {
        const double r = rho * double(k) / double(n);
        sol = ms_alpha(r, chi, tau, alpha, opts);
        alpha = sol.alpha;
    }
    return sol;
}

std::vector<cplx> ms_alpha_circle(double rho, std::span<const cplx> chis, cplx tau,
                                  const MSOptions& opts) {
    std::vector<cplx> out(chis.size());
    if (chis.empty()) return out;

    // Sequential seeding pass at relaxed tolerance.
    MSOptions seed_opts = opts;
    seed_opts.tol = std::max(opts.tol, 1e-8);
    seed_opts.success_tol = std::max(opts.success_tol, 1e-6);
    for (std::size_t j = 0; j < chis.size(); ++j) {
        try {
            if (j == 0) {
                out[0] = ms_alpha_ladder(rho, chis[0], tau, seed_opts).alpha;
            } else {
                // Continuation predictor: the dominant variation of alpha
                // along the circle is that of conj(chi).
                const cplx seed = out[j - 1] + std::conj(chis[j]) - std::conj(chis[j - 1]);
                out[j] = ms_alpha(rho, chis[j], tau, seed, seed_opts).alpha;
            }
        } catch (const std::exception& e) {
            throw solve_error("ms_alpha_circle: seeding failed at sample " +
                                  std::to_string(j) + ": " + e.what(),
                              0.0);
        }
    }

    // Parallel refinement to the requested tolerance.
    std::vector<std::string> failures(chis.size());
    parallel_for(chis.size(), [&](std::size_t j) {
        try {
            out[j] = ms_alpha(rho, chis[j], tau, out[j], opts).alpha;
        } catch (const std::exception& e) {
            failures[j] = e.what();
        }
    });
    for (std::size_t j = 0; j < failures.size(); ++j)
        if (!failures[j].empty())
            throw solve_error("ms_alpha_circle: refinement failed at sample " +
                                  std::to_string(j) + ": " + failures[j],
                              0.0);
    return out;
}

cplx ms_residue_probe(double rho, cplx tau, cplx gamma, double eps,
                      const MSOptions& opts) {
    if (!(eps > 1e-4 && eps < 1e-1))
        throw domain_error("ms_residue_probe: eps outside (1e-4, 1e-1)");
    auto [g1, g2] = jacobian_lattice(tau);
    auto [gred, is_lattice] = reduce_mod_lattice(gamma, tau);
    if (!is_lattice)
        throw domain_error("ms_residue_probe: gamma is not a lattice point");

    const int M = 16;
    const double r_start = 0.3 * std::min(std::abs(g1), std::abs(g2));

    // Radius ladder from r_start down to eps, walking contour points and
    // seeding each new radius from the previous one.
    std::vector<double> radii{r_start};
    while (radii.back() > eps * 1.0001) radii.push_back(std::max(eps, radii.back() * 0.5));

    auto point = [&](double r, int j) {
        return gamma + r * std::exp(2.0 * pi * I * double(j) / double(M));
    };

    std::vector<cplx> alphas(M);
    cplx res_est = 0.0; // running pole-term estimate, refined per radius
    for (std::size_t k = 0; k < radii.size(); ++k) {
        for (int j = 0; j < M; ++j) {
            const cplx chi = point(radii[k], j);
            cplx seed;
            if (k == 0) {
                if (j == 0) {
                    alphas[0] = ms_alpha_ladder(rho, chi, tau, opts).alpha;
                    continue;
                }
                seed = alphas[j - 1] + std::conj(chi) - std::conj(point(radii[0], j - 1));
            } else {
                // Same angle, smaller radius: track the pole term.
                seed = alphas[j] +
                       res_est * (1.0 / (chi - gamma) - 1.0 / (point(radii[k - 1], j) - gamma));
            }
            alphas[j] = ms_alpha(rho, chi, tau, seed, opts).alpha;
        }
        cplx acc = 0.0;
        for (int j = 0; j < M; ++j) acc += (point(radii[k], j) - gamma) * alphas[j];
        res_est = acc / double(M);
    }
    return res_est;
}

} // namespace whitham
