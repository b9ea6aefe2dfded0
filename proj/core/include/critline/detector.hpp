#pragma once

#include <string>
#include <vector>

#include "critline/forms.hpp"
#include "critline/lfunc.hpp"
#include "critline/mollifier.hpp"

namespace critline::detector {

using forms::CoeffTable;
using mollifier::DetectorParams;
using mollifier::MollifierTable;

enum class PointFlag { E1, E2, Indeterminate };

struct PointRecord {
    double t;
    double I1;
    double I2;
    double quad_err;  // summed quadrature error bounds for I1 and I2
    PointFlag flag;
    int confirmations;  // directly verified sign changes in (t-h1, t+h1)
};

/// Paper-chain budget: every truncated quantity of the Theorem-2 derivation,
/// evaluated at desk scale and reported without asymptotic assertions.
struct BudgetReport {
    double I3;           // integral of I1 over (1, T)
    double I1_over_E1;   // integral of I1 over E1
    double I2_total;     // integral of I2 over (1, T)
    double int_I1_sq;    // integral of I1^2 over the grid range
    double int_I2_sq;
    double cauchy_schwarz_I1;  // mu(E1)^{1/2} (int I1^2)^{1/2}
    double cauchy_schwarz_I2;  // (T-1)^{1/2} (int I2^2)^{1/2}
};

struct DetectionReport {
    DetectorParams params;
    double T;
    double step;
    std::vector<PointRecord> points;
    double mu_E1;
    double n0_bound;  // mu(E1) / (2 h1) - 1
    long direct_sign_changes;  // independent Z-scan count on (0, T)
    BudgetReport budget;
    bool regime_flagged;  // DetectorParams advisory
};

/// Classifies gridpoints of (1, T) by the strict window inequality
/// I1(t) > I2(t). Every E1 flag is cross-confirmed by a direct sign-change
/// scan; quadrature failures are excluded from mu(E1) (conservative).
/// Requires step <= h1/4.
DetectionReport detect_intervals(const CoeffTable& table, const MollifierTable& m,
                                 const DetectorParams& p, double T, double step);

struct GValue {
    double value;      // G(y) >= 0
    double majorant;   // triangle-inequality majorant M(y)
    double tail;       // bound on the truncated part of the triple sum
};

/// G(y) of the mollified apparatus: modulus-squared of the triple sum over
/// (n, nu1, nu2) with the rotated exponential kernel, truncated where the
/// exponential majorant drops below `tol`.
GValue g_of_y(double y, const CoeffTable& table, const MollifierTable& m,
              const DetectorParams& p, double tol = 1e-12);

struct GProfilePoint {
    double y;
    double G;
    double majorant;
    double tail_bound;
};
using GProfile = std::vector<GProfilePoint>;

GProfile g_profile(const std::vector<double>& ys, const CoeffTable& table,
                   const MollifierTable& m, const DetectorParams& p, double tol = 1e-12);

struct JResult {
    double value;
    double quad_err;
    double tail_bound;  // certificate for the cut at the far end
    double cutoff;      // truncation point actually used
};

/// J(x, vartheta) = integral of G(u) u^{-vartheta} over (x, infinity),
/// 0 < vartheta <= 1/4, adaptive with the exponential-majorant certificate.
JResult j_integral(double x, double vartheta, const CoeffTable& table,
                   const MollifierTable& m, const DetectorParams& p, double tol = 1e-8);

struct Lemma1Report {
    double lhs1, rhs1;  // window-L1 squared mass vs 8 h1^2 int_1^Y G + tail
    double lhs2, rhs2;  // window-mean squared mass vs the H-split bound
    double lhs_quad_err;
    double g_tail_bound;
    double H;  // e^{1/h1}
    double Y;  // used truncation of the G integrals
    bool holds1, holds2;
};

/// Both Lemma-1 inequalities with all truncations in the safe direction:
/// the t-integrals are cut at +-T0 (shrinking the left side only) and the
/// G-integrals carry explicit tail certificates on the right.
Lemma1Report lemma1_truncated_check(const CoeffTable& table, const MollifierTable& m,
                                    const DetectorParams& p, double T0);

void write_detection_csv(const std::string& path, const DetectionReport& report);
void write_gprofile_csv(const std::string& path, const GProfile& profile);

}  // namespace critline::detector
