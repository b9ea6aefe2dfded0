#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "critline/forms.hpp"
#include "critline/mollifier.hpp"

namespace critline::sums {

using Complex = std::complex<double>;
using forms::CoeffTable;
using mollifier::MollifierTable;

/// Named numerical result with truncation bounds; the shared currency of
/// every verification operation.
struct SumReport {
    std::string name;
    std::string params;  // "key=value;key=value", comma-free
    Complex value{0.0, 0.0};
    Complex oracle{0.0, 0.0};
    bool has_oracle = false;
    double discrepancy = 0.0;  // |value - oracle| when an oracle exists
    double tail_bound = 0.0;

    void set_oracle(Complex o) {
        oracle = o;
        has_oracle = true;
        discrepancy = std::abs(value - o);
    }
};

void write_sum_reports_csv(const std::string& path, const std::vector<SumReport>& reports);

/// K(m, s) by two methods: (A) the closed per-prime quotient of the two
/// local series, (B) the ratio of truncated sums over the m-smooth integers
/// {n : rad(n) | rad(m)}. All prime factors of m must exceed 256 and the
/// per-prime series are cut by their geometric majorant from |r(p^j)| <= j+1.
struct KFactorResult {
    Complex method_a;
    Complex method_b;
    double tail_bound;
};
KFactorResult k_factor(std::uint64_t m, Complex s, const CoeffTable& table);

std::uint64_t tau6(std::uint64_t m);

/// Direct quadruple Selberg sum S(vartheta) over the beta support
/// (compensated summation, memoized K-factors). Support caps at 200 entries.
SumReport selberg_sum(double vartheta, double X, const CoeffTable& table,
                      const MollifierTable& m);

/// The d,m-decomposition of S(vartheta) through Moebius inversion;
/// must equal selberg_sum.
SumReport selberg_sum_decomposed(double vartheta, double X, const CoeffTable& table,
                                 const MollifierTable& m);

/// b(n) = sum_{n1 n2 = n} |alpha(n1) alpha(n2)|; multiplicative with
/// b(p) = |r(p)|, b(p^2) = |r(p)|^2/4, zero past cube divisibility.
double b_function(std::uint64_t n, const MollifierTable& m);

struct RankinSeries {
    Complex value;
    double tail_bound;  // finite only when the tau^2 majorant certifies (Re s > 5/3)
};
RankinSeries rankin_series(Complex s, const CoeffTable& table, std::uint32_t N);

struct RankinMean {
    double x;
    double mean;  // (1/x) sum_{n<=x} |r(n)|^2
    std::vector<std::pair<double, double>> doubling_trace;  // (x_i, mean_i), x_i = x/2^i
};
RankinMean rankin_mean(double x, const CoeffTable& table);

/// S = sum_{n < N} r(n) conj(r((m1 n + l)/m2)), r vanishing off the
/// integers. Computed by two independent loop orders (forward filter and
/// residue-class bucket) which must agree bitwise.
struct ShiftedSum {
    Complex forward;
    Complex bucketed;
    double abs_sum;      // sum of |terms|
    long terms;
    double cancellation_ratio;  // |S| / sum |terms|
};
ShiftedSum shifted_convolution(std::uint32_t N, std::uint32_t m1, std::uint32_t m2,
                               std::uint64_t l, const CoeffTable& table);

/// Partial D_{m1,m2}(s, l) = sum r(n) conj(r((m1 n+l)/m2)) (m1 n + l/2)^{-s}.
/// Tail certificate from the divisor-bound family needs Re s > 5/3; below
/// that the value is a labeled partial sum (tail_bound = +infinity).
struct ShiftedDirichlet {
    Complex value;
    double tail_bound;
};
ShiftedDirichlet shifted_dirichlet(Complex s, std::uint64_t l, std::uint32_t m1,
                                   std::uint32_t m2, const CoeffTable& table,
                                   std::uint32_t N);

/// Truncation-matched check of the l = 0 splitting
/// D_{m1,m2}(s) = (m1 m2)^{-s} K(m1,s) conj(K(m2,s)) D(s):
/// both sides assembled as Dirichlet polynomials over the same index set,
/// so they agree to roundoff whenever the K-expansion is correct.
SumReport shifted_split_check(Complex s, std::uint32_t m1, std::uint32_t m2,
                              const CoeffTable& table, std::uint32_t N);

/// S_vartheta(X1, gamma, N) = sum over the alpha support, coprime to N, of
/// alpha(lambda) K(lambda, 1-vartheta) lambda^{gamma-1} ln(X1/lambda).
/// The report records the ratio against the bound shape
/// X1^gamma sqrt(ln(X1+2)) prod_{p|N} (1+1/p)^2.
SumReport estimate13_sum(double X1, double gamma, double vartheta, std::uint64_t N,
                         const CoeffTable& table);

/// Exact integer self-test of f(q) = sum_{d|q} sum_{m|d} mu(m) f(d/m).
bool moebius_identity_check(std::uint64_t q);

}  // namespace critline::sums
