#pragma once

#include <array>
#include <complex>
#include <functional>

namespace critline::specfun {

using Complex = std::complex<double>;

/// Principal branch of ln Gamma(s); reflection formula for Re s < 1/2.
/// Relative accuracy of exp(log_gamma(s)) is ~1e-13 for |Im s| <= 200.
Complex log_gamma(Complex s);

/// J_m(x) for integer order m >= 0, x >= 0. Power series for small x,
/// Miller's downward recurrence in the mid range, Hankel asymptotics for
/// large x (phase reduction done in long double).
double bessel_j(int m, double x);

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
    // Initial uniform split; a lone panel can alias an oscillatory integrand
    // into an accidentally small error estimate, so callers that know the
    // oscillation count should raise this.
    int initial_panels = 8;
};

struct QuadResult {
    Complex value{0.0, 0.0};
    double error = 0.0;       // estimated absolute error
    bool converged = false;
    int subdivisions = 0;
    double tail_bound = 0.0;  // improper integrals: certified bound on the cut tail
};

/// Adaptive Gauss-Kronrod 7-15 on [a,b].
QuadResult integrate(const std::function<Complex(double)>& f, double a, double b,
                     const QuadratureSpec& spec = {});

/// Exponential-decay certificate for improper integrals: the caller asserts
/// |f(x)| <= M e^{-rate (x - a)} with M estimated from samples near a.
struct DecayCertificate {
    double rate;  // > 0
};

QuadResult integrate_to_inf(const std::function<Complex(double)>& f, double a,
                            DecayCertificate decay, const QuadratureSpec& spec = {});

/// Throws std::runtime_error naming the failure if `r` did not converge.
Complex require_converged(const QuadResult& r, const char* what);

/// Upper incomplete gamma Gamma(a, z) for complex a and z with Re z > 0 or
/// |arg z| < pi/2 + margin. Continued fraction when |z| dominates |a|;
/// otherwise a quadrature bridge along [z, R] joined to the CF at real R.
Complex upper_gamma(Complex a, Complex z);

// 16-point Gauss-Legendre rule on [-1, 1], used by the panel evaluators.
const std::array<double, 16>& gl16_nodes();
const std::array<double, 16>& gl16_weights();
const std::array<double, 8>& gl8_nodes();
const std::array<double, 8>& gl8_weights();

}  // namespace critline::specfun
