#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "critline/forms.hpp"

namespace critline::lfunc {

using Complex = std::complex<double>;
using forms::CoeffTable;

/// Complex value as (log-modulus, phase). Everything evaluated on or near
/// the critical line is carried this way so the exp((pi/2 - delta) t)
/// weights of the detector never meet an overflow.
struct LogComplex {
    double log_mod;  // -infinity encodes an exact zero
    double phase;    // radians, principal

    static LogComplex from(Complex z);
    static LogComplex zero();
    Complex to_complex() const;  // may underflow for very negative log_mod
    LogComplex scaled(double log_factor) const { return {log_mod + log_factor, phase}; }
};

struct LambdaValue {
    LogComplex value;
    double rel_err;
};

struct LResult {
    Complex value;
    double abs_err;
};

struct LineSample {
    double t;
    LogComplex lambda_log;  // Lambda(1/2 + it)
    double z;               // Re(theta^{-1/2} Lambda) * e^{pi |t| / 2}
    double eval_error;      // bound on the relative imaginary residue
};

struct ZeroRecord {
    double t;        // left end of the bracketing grid cell
    double z_left;
    double z_right;
    double refined;  // refined ordinate
    double err;      // bracket half-width plus evaluator noise
};

struct ZeroReport {
    double T = 0.0;
    std::vector<double> ordinates;
    long count_argument = 0;  // argument-principle N(T)
    long count_signs = 0;     // verified sign changes of Z on (0, T]
    std::vector<ZeroRecord> records;
};

/// L(s). Plain partial sum with a tau(n)-majorized tail certificate for
/// Re s > 1; folded approximate-functional-equation evaluation for
/// 1/2 < Re s <= 1 (requires the root number). Throws naming the required
/// series length when n_max cannot meet `tol`.
LResult l_value(const CoeffTable& table, Complex s, std::uint32_t max_terms = 0,
                double tol = 1e-10);

/// Completed Lambda(s) by the folded AFE: incomplete-gamma weights on a ray
/// rotated by phi = sign(t)(pi/2 - delta(t)), both sides of the functional
/// equation combined. Requires table.form().root_number_known.
LambdaValue completed(const CoeffTable& table, Complex s);

/// Theta-free reference evaluator: Lambda(s) as the full (unfolded) Mellin
/// integral along a rotated ray, on precomputed Gauss-Legendre panels.
/// Valid for sigma in [sigma_min, sigma_max], |Im s| <= t_max. This is the
/// evaluator functional-equation residuals are measured against, since it
/// never uses the functional equation itself.
class UnfoldedEvaluator {
public:
    UnfoldedEvaluator(const CoeffTable& table, double t_max, double sigma_min = -0.1,
                      double sigma_max = 1.2, double tol = 1e-13);
    LambdaValue completed(Complex s) const;
    double node_count() const { return double(nodes_u_.size()); }

private:
    const CoeffTable* table_;
    double t_max_, sigma_min_, sigma_max_, tol_;
    double phi_;            // rotation angle
    double err_scale_;      // panel verification residual
    std::vector<double> nodes_u_;       // u = ln v
    std::vector<Complex> node_weight_;  // quad weight * g_phi(e^u) * e^{-u? folded into eval}
};

/// theta = Lambda(s0) / conj(Lambda(1 - conj(s0))) measured at probe points
/// with the unfolded evaluator; verified stable across three probes to 1e-8
/// and unit-modulus to 1e-8. Stores the result into the table's FormSpec.
Complex root_number(CoeffTable& table);

/// Z(t) = Re(theta^{-1/2} Lambda(1/2+it)) rescaled by e^{pi|t|/2} in log
/// space; the imaginary residue is recorded as eval_error evidence.
LineSample hardy_z(const CoeffTable& table, double t);

/// Fast critical-line evaluator on fixed panels: returns
/// U(t) = theta^{-1/2} Lambda(1/2+it) e^{(pi/2 - delta_rot) t}, which is
/// real up to evaluator noise and shares the sign of Z(t) for t >= 0.
class LineEvaluator {
public:
    LineEvaluator(const CoeffTable& table, double delta_rot, double t_max,
                  double tol = 1e-13);
    double rotated_scaled(double t) const;      // U(t)
    double z(double t) const;                   // U(t) e^{delta_rot t}
    double noise_floor(double t) const;         // absolute error bound on U(t)
    double delta_rot() const { return delta_rot_; }
    double t_max() const { return t_max_; }
    std::size_t node_count() const { return nodes_u_.size(); }

private:
    Complex line_integral(double t) const;
    const CoeffTable* table_;
    double delta_rot_, t_max_, tol_;
    double delta_int_;     // internal rotation backoff actually integrated at
    double rescale_;       // delta_int - delta_rot, applied as e^{rescale t}
    Complex rot_front_;    // theta^{-1/2} e^{i phi k / 2}
    double abs_err_;       // absolute bound on the panel integral
    std::vector<double> nodes_u_;
    std::vector<Complex> node_weight_;
};

/// N(T) by continuous phase tracking of Lambda around the rectangle
/// {0 <= Re s <= 1, 0 < Im s <= T} (adaptive stepping, steps halved until
/// each increment is below pi/2), plus a Z-scan sign-change count with
/// bisection refinement. T within 1e-3 of a zero ordinate is nudged.
ZeroReport count_zeros(const CoeffTable& table, double T, double scan_step = 0.05);

/// Abel-summed series oracle: Richardson extrapolation of
/// sum r(n) n^{-s} e^{-eps n} through `levels` halvings of eps0.
Complex l_value_abel(const CoeffTable& table, Complex s, int levels = 7,
                     double eps0 = 0.05);

void write_zero_csv(const std::string& path, const ZeroReport& report);

}  // namespace critline::lfunc
