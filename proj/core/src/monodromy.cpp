#include "whitham/monodromy.hpp"

#include <algorithm>
#include <cmath>

namespace whitham {

namespace detail {

double segment_lattice_distance(cplx a, cplx b, cplx tau) {
    // Enumerate lattice points near the segment's bounding box and take the
    // minimum point-to-segment distance.
    const double vmin = std::min(a.imag(), b.imag()) / tau.imag() - 1.0;
    const double vmax = std::max(a.imag(), b.imag()) / tau.imag() + 1.0;
    double best = std::numeric_limits<double>::max();
    const cplx ab = b - a;
    const double ab2 = std::norm(ab);
    for (long n = std::lround(std::floor(vmin)); n <= std::lround(std::ceil(vmax)); ++n) {
        const double re_lo = std::min(a.real(), b.real()) - n * tau.real() - 1.0;
        const double re_hi = std::max(a.real(), b.real()) - n * tau.real() + 1.0;
        for (long m = std::lround(std::floor(re_lo)); m <= std::lround(std::ceil(re_hi)); ++m) {
            const cplx p = double(m) + double(n) * tau;
            // projection parameter of p on the segment, clamped to it
            const double t = ab2 > 0.0
                    ? std::clamp(((p - a) * std::conj(ab)).real() / ab2, 0.0, 1.0)
                    : 0.0;
            best = std::min(best, std::abs(a + t * ab - p));
        }
    }
    return best;
}

ConnectionEval::ConnectionEval(const ConnectionPoint& P, double theta_scale)
    : P_(P), L_(P.tau), diagonal_(P.rho == 0.0), scale_(theta_scale) {
    if (!diagonal_) {
        const cplx x = (P.tau - std::conj(P.tau)) / (2.0 * pi * I) * P.chi;
        x2_ = 2.0 * x;
        if (lattice_distance(x2_, P.tau) < 2e-6)
            throw domain_error("connection: chi on the Jacobian lattice, "
                               "off-diagonal degenerates");
        const cplx tp0 = theta_deriv0(L_, scale_);
        konst_up_ = P.rho * tp0 / theta(-x2_, L_, scale_);
        konst_dn_ = P.rho * tp0 / theta(x2_, L_, scale_);
        cexp_ = 2.0 * pi * I / (std::conj(P.tau) - P.tau) * x2_;
    }
}

Mat2 ConnectionEval::eval(cplx w, cplx wdot) const {
    const cplx diag = P_.alpha * wdot - P_.chi * std::conj(wdot);
    if (diagonal_) return Mat2{diag, 0.0, 0.0, -diag};
    // beta_{2x}(w)  = theta(w-2x)/theta(w) e^{ cexp (w - conj w)}
    // beta_{-2x}(w) = theta(w+2x)/theta(w) e^{-cexp (w - conj w)}
    const cplx tw = theta(w, L_, scale_);
    const cplx tm = theta(w - x2_, L_, scale_);
    const cplx tp = theta(w + x2_, L_, scale_);
    const cplx ex = std::exp(cexp_ * (w - std::conj(w)));
    const cplx up = konst_up_ * (tm / tw) * ex * wdot;
    const cplx dn = konst_dn_ * (tp / tw) / ex * wdot;
    return Mat2{diag, up, dn, -diag};
}

std::pair<Mat2, Mat2> ConnectionEval::coefficients(cplx w) const {
    const Mat2 a_dwbar = Mat2::diag(-P_.chi, P_.chi);
    if (diagonal_)
        return {Mat2::diag(P_.alpha, -P_.alpha), a_dwbar};
    const cplx tw = theta(w, L_, scale_);
    const cplx tm = theta(w - x2_, L_, scale_);
    const cplx tp = theta(w + x2_, L_, scale_);
    const cplx ex = std::exp(cexp_ * (w - std::conj(w)));
    Mat2 a_dw{P_.alpha, konst_up_ * (tm / tw) * ex,
              konst_dn_ * (tp / tw) / ex, -P_.alpha};
    return {a_dw, a_dwbar};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

Mat2 transport_segment(const detail::ConnectionEval& ev, cplx a, cplx b,
                       const TransportOptions& opts) {
    const cplx dw = b - a;
    const double len = std::abs(dw);
    if (len == 0.0) return Mat2::identity();

    auto rhs = [&](double t, const Mat2& F) {
        return (-1.0) * (ev.eval(a + t * dw, dw) * F);
    };

    Mat2 F = Mat2::identity();
    double t = 0.0;
    double h = 0.02;
    Mat2 k1 = rhs(t, F); // FSAL
    int rejected_in_a_row = 0;
    while (t < 1.0) {
        h = std::min(h, 1.0 - t);
        const Mat2 k2 = rhs(t + h * A21, F + (h * A21) * k1);
        const Mat2 k3 = rhs(t + h * (A31 + A32), F + (h * A31) * k1 + (h * A32) * k2);
        const Mat2 k4 = rhs(t + h * (A41 + A42 + A43),
                            F + (h * A41) * k1 + (h * A42) * k2 + (h * A43) * k3);
        const Mat2 k5 = rhs(t + h * (A51 + A52 + A53 + A54),
                            F + (h * A51) * k1 + (h * A52) * k2 + (h * A53) * k3 +
                                (h * A54) * k4);
        const Mat2 k6 = rhs(t + h,
                            F + (h * A61) * k1 + (h * A62) * k2 + (h * A63) * k3 +
                                (h * A64) * k4 + (h * A65) * k5);
        const Mat2 F5 = F + (h * B1) * k1 + (h * B3) * k3 + (h * B4) * k4 +
                        (h * B5) * k5 + (h * B6) * k6;
        const Mat2 k7 = rhs(t + h, F5);
        const Mat2 err = (h * E1) * k1 + (h * E3) * k3 + (h * E4) * k4 +
                         (h * E5) * k5 + (h * E6) * k6 + (h * E7) * k7;
        const double scale = opts.atol + opts.rtol * std::max(F.norm_inf(), F5.norm_inf());
        const double errnorm = err.norm_inf() / scale;
        if (errnorm <= 1.0) {
            t += h;
            F = F5;
            k1 = k7;
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row > 40) {
            const cplx at = a + t * dw;
            throw integration_error("parallel_transport: repeated step rejection",
                                    at.real(), at.imag());
        }
        const double fac = 0.9 * std::pow(std::max(errnorm, 1e-12), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
        if (h < 1e-12) {
            const cplx at = a + t * dw;
            throw integration_error("parallel_transport: step underflow near pole",
                                    at.real(), at.imag());
        }
    }
    return F;
}

} // namespace
} // namespace detail

std::pair<Mat2, Mat2> connection_form(const ConnectionPoint& P, cplx w,
                                      double theta_scale) {
    if (detail::lattice_distance(w, P.tau) < 1e-6)
        throw domain_error("connection_form: w too close to a puncture");
    detail::ConnectionEval ev(P, theta_scale);
    return ev.coefficients(w);
}

Mat2 parallel_transport(const ConnectionPoint& P, const Polyline& path,
                        const TransportOptions& opts) {
    if (path.size() < 2)
        throw domain_error("parallel_transport: path needs at least 2 vertices");
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (detail::segment_lattice_distance(path[i], path[i + 1], P.tau) < opts.delta_path)
            throw domain_error("parallel_transport: path too close to a puncture");
    }
    detail::ConnectionEval ev(P, opts.theta_scale);
    Mat2 F = Mat2::identity();
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        F = detail::transport_segment(ev, path[i], path[i + 1], opts) * F;
    return F;
}

MonodromyPair monodromies(const ConnectionPoint& P, cplx base_point,
                          const TransportOptions& opts) {
    detail::ConnectionEval ev(P, opts.theta_scale);
    MonodromyPair mp;
    mp.M1 = detail::transport_segment(ev, base_point, base_point + 2.0, opts);
    mp.M2 = detail::transport_segment(ev, base_point, base_point + 2.0 * P.tau, opts);
    mp.t1 = mp.M1.trace();
    mp.t2 = mp.M2.trace();
    return mp;
}

MonodromyPair monodromies(const ConnectionPoint& P, const TransportOptions& opts) {
    return monodromies(P, 0.5 * (1.0 + P.tau), opts);
}

std::pair<double, double> unitarizability_residual(const ConnectionPoint& P,
                                                   const TransportOptions& opts) {
    const MonodromyPair mp = monodromies(P, opts);
    return {mp.t1.imag(), mp.t2.imag()};
}

UnitarizabilityCheck check_unitarizable(const ConnectionPoint& P,
                                        const TransportOptions& opts) {
    const MonodromyPair mp = monodromies(P, opts);
    constexpr double tol = 1e-8;
    const bool real_traces =
        std::abs(mp.t1.imag()) <= tol && std::abs(mp.t2.imag()) <= tol;
    const bool in_range = std::abs(mp.t1.real()) <= 2.0 + tol &&
                          std::abs(mp.t2.real()) <= 2.0 + tol;
    const bool boundary = std::abs(std::abs(mp.t1.real()) - 2.0) <= tol ||
                          std::abs(std::abs(mp.t2.real()) - 2.0) <= tol;
    return {real_traces && in_range, boundary, mp.t1, mp.t2};
}

} // namespace whitham
