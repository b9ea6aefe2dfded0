#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "critline/forms.hpp"
#include "critline/lfunc.hpp"

namespace critline::mollifier {

using Complex = std::complex<double>;
using forms::CoeffTable;

/// alpha(nu), beta(nu) for nu <= X. alpha is supported on squarefree
/// integers all of whose prime factors exceed 256, with alpha(1) = 1,
/// alpha(p) = -r(p)/2 and multiplicative continuation;
/// beta(nu) = alpha(nu) (1 - ln nu / ln X)^+.
class MollifierTable {
public:
    struct Entry {
        std::uint64_t nu;
        Complex alpha;
        Complex beta;
    };

    MollifierTable(const CoeffTable& source, double X, std::vector<Entry> entries);

    double X() const { return X_; }
    const std::vector<Entry>& entries() const { return entries_; }
    const CoeffTable& source() const { return *source_; }

    Complex alpha(std::uint64_t nu) const;  // 0 off support
    Complex beta(std::uint64_t nu) const;

private:
    const CoeffTable* source_;
    double X_;
    std::vector<Entry> entries_;  // ascending nu
};

/// Enumerates the support by depth-first products of the primes in
/// (256, X]; the table must cover all primes <= X.
MollifierTable build_mollifier(const CoeffTable& table, double X);

/// phi(s) = sum_{nu <= X} beta(nu) nu^{-s}; exact finite evaluation.
Complex phi(Complex s, const MollifierTable& m);

/// Detector parameters of the mollified apparatus. The advisory flag marks
/// parameter choices outside the regime delta X^86 e^{1/h1} <= 1 (checked in
/// log space); such runs are permitted but flagged.
struct DetectorParams {
    double delta;
    double h1;
    double X;

    void validate() const;  // throws unless 0 < delta < 1/10 and 0 < h1 < 1
    bool outside_theorem2_regime() const;
};

struct FrakF {
    lfunc::LogComplex value;  // frak F(t)
    double rotated_real;      // theta^{-1/2} frak F(t)
    double rel_err;
};

/// frak F(t) = (2 pi)^{-1/2} Lambda(1/2+it) |phi(1/2+it)|^2 e^{(pi/2-delta) t},
/// composed entirely in log space; also returns the rotated real value.
FrakF frak_F(double t, const CoeffTable& table, const MollifierTable& m,
             const DetectorParams& p);

void write_mollifier_csv(const std::string& path, const MollifierTable& m);

}  // namespace critline::mollifier
