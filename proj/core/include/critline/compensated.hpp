#pragma once

#include <complex>

namespace critline {

// Neumaier (improved Kahan) accumulator. Every cancellation-sensitive sum in
// this project (Selberg sums, shifted convolutions, detector integrands)
// goes through one of these instead of a bare double.
class KahanSum {
public:
    KahanSum() = default;
    explicit KahanSum(double init) : sum_(init) {}

    KahanSum& operator+=(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }

    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

class KahanSumComplex {
public:
    KahanSumComplex& operator+=(std::complex<double> z) {
        re_ += z.real();
        im_ += z.imag();
        return *this;
    }

    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_, im_;
};

}  // namespace critline
