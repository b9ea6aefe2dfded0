#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "critline/forms.hpp"
#include "critline/sums.hpp"

namespace critline::voronoi {

using Complex = std::complex<double>;
using forms::CoeffTable;
using sums::SumReport;

/// Smooth compactly supported test kernel on (u0, u1). The raised cosine is
/// the cheap default (C^1, piecewise C^2); the exp bump is C-infinity and is
/// the kernel of record wherever the dual sum must be truncated hard.
class TestKernel {
public:
    enum class Shape { RaisedCosine, ExpBump };

    TestKernel(Shape shape, double u0, double u1, double steepness = 1.0);

    double operator()(double t) const;
    double deriv1(double t) const;
    double deriv2(double t) const;
    double peak() const;  // maximum of the kernel (attained at the midpoint)

    double u0() const { return u0_; }
    double u1() const { return u1_; }
    Shape shape() const { return shape_; }
    const std::string& name() const { return name_; }

private:
    Shape shape_;
    double u0_, u1_, steepness_;
    std::string name_;
};

struct KTilde {
    Complex value;
    double quad_err;
};

/// Bessel transform of the kernel,
///   k~(n) = (2 pi i^k / q) int_0^inf k(t) J_{k-1}(4 pi sqrt(n t)/q) dt,
/// with subdivision at most one Bessel oscillation wide.
KTilde k_tilde(std::uint64_t n, std::uint64_t q, const TestKernel& kernel, int weight);

struct TwistedIdentityResult {
    Complex lhs;
    Complex rhs;
    double residual;      // relative, against max(|lhs|, |rhs|)
    double rhs_tail;      // monitored-decay truncation certificate
    std::uint64_t rhs_terms;
    SumReport report;
};

/// Two-sided evaluation of the twisted summation identity
///   sum r(n) k(n) e(an/q) = conj(chi(a)) sum r(n) e(-a* n/q) k~(n)
/// for q = 0 mod D, gcd(a, q) = 1, a a* = 1 mod q.
TwistedIdentityResult twisted_identity_check(std::int64_t a, std::uint64_t q,
                                             const TestKernel& kernel,
                                             const CoeffTable& table,
                                             double tol = 1e-8);

/// Contour check of (1/2 pi i) int e^{as - b/s} s^{-k} ds
///   = (a/b)^{(k-1)/2} J_{k-1}(2 sqrt(ab)),
/// contour Re s = c, two analytic integrations by parts before truncation.
SumReport bessel_mellin_check(double a, double b, int k, double c, double height_cap = 1e6);

struct ResidualRow {
    std::string form;
    std::int64_t a;
    std::uint64_t q;
    std::string kernel;
    double u0, u1;
    Complex lhs, rhs;
    double residual;
};

void write_residual_csv(const std::string& path, const std::vector<ResidualRow>& rows);

}  // namespace critline::voronoi
