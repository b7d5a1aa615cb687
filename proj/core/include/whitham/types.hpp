#ifndef WHITHAM_TYPES_HPP
#define WHITHAM_TYPES_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace whitham {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

/// Thrown when an argument lies outside an operation's domain
/// (lattice points, parameter windows, malformed input).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when an iterative solver fails; carries the last residual norm.
class solve_error : public std::runtime_error {
public:
    solve_error(const std::string& msg, double residual)
        : std::runtime_error(msg), residual_norm(residual) {}
    double residual_norm;
};

/// Thrown when the ODE integrator cannot meet its tolerance (step underflow
/// near a pole of the connection form).
class integration_error : public std::runtime_error {
public:
    integration_error(const std::string& msg, double w_re, double w_im)
        : std::runtime_error(msg), where(w_re, w_im) {}
    cplx where;
};

/// Thrown by reconstruction when a state fails its closing conditions.
class closing_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 2x2 complex matrix, value type. Row-major entries a b / c d.
struct Mat2 {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static Mat2 identity() { return {}; }
    static Mat2 diag(cplx p, cplx q) { return {p, 0.0, 0.0, q}; }

    cplx trace() const { return a + d; }
    cplx det() const { return a * d - b * c; }

    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }

    Mat2& operator+=(const Mat2& o) {
        a += o.a; b += o.b; c += o.c; d += o.d;
        return *this;
    }

    Mat2 inverse() const {
        const cplx dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    /// Conjugate transpose.
    Mat2 adjoint() const {
        return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
    }

    double norm_inf() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }
};

inline Mat2 operator*(cplx s, const Mat2& m) { return m * s; }

inline double mat_dist(const Mat2& x, const Mat2& y) { return (x - y).norm_inf(); }

using Polyline = std::vector<cplx>;

} // namespace whitham

#endif
