#include "critline/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "critline/arith.hpp"
#include "critline/compensated.hpp"
#include "critline/csv.hpp"
#include "critline/specfun.hpp"

namespace critline::voronoi {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("voronoi: " + msg);
}

Complex i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

TestKernel::TestKernel(Shape shape, double u0, double u1, double steepness)
    : shape_(shape), u0_(u0), u1_(u1), steepness_(steepness) {
    if (!(0.0 < u0 && u0 < u1)) fail("TestKernel: need 0 < u0 < u1");
    if (!(steepness > 0.0)) fail("TestKernel: steepness must be positive");
    name_ = (shape == Shape::RaisedCosine ? "raised_cosine" : "exp_bump");
}

double TestKernel::operator()(double t) const {
    if (t <= u0_ || t >= u1_) return 0.0;
    const double w = u1_ - u0_;
    if (shape_ == Shape::RaisedCosine) {
        const double s = std::sin(kPi * (t - u0_) / w);
        return s * s;
    }
    return std::exp(-steepness_ * w * w / ((t - u0_) * (u1_ - t)));
}

double TestKernel::deriv1(double t) const {
    if (t <= u0_ || t >= u1_) return 0.0;
    const double w = u1_ - u0_;
    if (shape_ == Shape::RaisedCosine) {
        return (kPi / w) * std::sin(2.0 * kPi * (t - u0_) / w);
    }
    const double A = t - u0_, B = u1_ - t;
    return (*this)(t) * steepness_ * w * w * (B - A) / (A * A * B * B);
}

double TestKernel::peak() const {
    return shape_ == Shape::RaisedCosine ? 1.0 : std::exp(-4.0 * steepness_);
}

double TestKernel::deriv2(double t) const {
    if (t <= u0_ || t >= u1_) return 0.0;
    const double w = u1_ - u0_;
    if (shape_ == Shape::RaisedCosine) {
        return (2.0 * kPi * kPi / (w * w)) * std::cos(2.0 * kPi * (t - u0_) / w);
    }
    const double h = 1e-6 * w;
    return ((*this)(t + h) - 2.0 * (*this)(t) + (*this)(t - h)) / (h * h);
}

KTilde k_tilde(std::uint64_t n, std::uint64_t q, const TestKernel& kernel, int weight) {
    if (n == 0 || q == 0) fail("k_tilde: n and q must be positive");
    if (weight < 1) fail("k_tilde: weight must be >= 1");
    const int order = weight - 1;
    const double freq = 4.0 * kPi * std::sqrt(double(n)) / double(q);
    const auto integrand = [&](double t) {
        return Complex(kernel(t) * specfun::bessel_j(order, freq * std::sqrt(t)), 0.0);
    };
    // split points one Bessel oscillation apart: freq (sqrt(t2) - sqrt(t1)) = 2 pi
    std::vector<double> cuts{kernel.u0()};
    double su = std::sqrt(kernel.u0());
    const double su_end = std::sqrt(kernel.u1());
    while ((su += 2.0 * kPi / freq) < su_end) cuts.push_back(su * su);
    cuts.push_back(kernel.u1());

    specfun::QuadratureSpec spec;
    // absolute floor scaled to the kernel size: steep bumps are tiny, and the
    // dual-sum truncation certificate below depends on resolving them
    spec.abs_tol = std::max(1e-16, 1e-9 * kernel.peak()) / double(cuts.size());
    spec.rel_tol = 1e-11;
    spec.max_subdivisions = 200;
    spec.initial_panels = 2;  // each segment spans a single Bessel oscillation
    KahanSumComplex acc;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const specfun::QuadResult r = specfun::integrate(integrand, cuts[i], cuts[i + 1], spec);
        if (!r.converged) fail("k_tilde: quadrature non-convergence");
        acc += r.value;
        err += r.error;
    }
    const Complex front = 2.0 * kPi * i_pow(weight) / double(q);
    return {front * acc.value(), std::abs(front) * err};
}

TwistedIdentityResult twisted_identity_check(std::int64_t a, std::uint64_t q,
                                             const TestKernel& kernel,
                                             const CoeffTable& table, double tol) {
    const forms::FormSpec& form = table.form();
    if (q == 0 || q % form.level != 0)
        fail("twisted_identity_check: q must be a positive multiple of the level D");
    if (std::gcd(std::uint64_t(((a % std::int64_t(q)) + std::int64_t(q)) % std::int64_t(q)),
                 q) != 1 &&
        q != 1)
        fail("twisted_identity_check: gcd(a, q) must be 1");

    const std::uint64_t a_star = q == 1 ? 0 : inv_mod(a, q);
    const std::uint64_t a_mod = q == 1 ? 0 : std::uint64_t(((a % std::int64_t(q)) + std::int64_t(q)) % std::int64_t(q));
    const Complex chi_bar = std::conj(form.chi.value(a));

    // LHS: finitely many integer points inside the kernel support.
    KahanSumComplex lhs;
    for (std::uint64_t n = std::uint64_t(std::floor(kernel.u0())) + 1;
         double(n) < kernel.u1(); ++n) {
        if (n > table.n_max()) fail("twisted_identity_check: kernel support exceeds coverage");
        const double phase = 2.0 * kPi * double((a_mod * (n % q)) % q) / double(q);
        lhs += table.r(n) * kernel(double(n)) * Complex(std::cos(phase), std::sin(phase));
    }
    const double lhs_abs = std::abs(lhs.value());
    if (lhs_abs == 0.0) fail("twisted_identity_check: kernel support contains no integers");

    // RHS: monitored-decay truncation of the Bessel-transformed dual sum.
    // The kernel transform decays super-polynomially, so a window of
    // consecutive terms below threshold ends the sum; the threshold cannot
    // usefully sit below the k~ quadrature noise floor.
    const double cut_tol = 0.3 * tol * lhs_abs;
    constexpr std::size_t kWindow = 48;
    std::deque<double> window, err_window;
    KahanSumComplex rhs;
    double quad_err = 0.0;
    std::uint64_t n = 0;
    const double transition = double(q) * double(q) * double(std::max(1, (form.weight - 1) * (form.weight - 1))) /
                              (16.0 * kPi * kPi * kernel.u0());
    bool cut = false;
    ArithCache divisors(table.n_max());
    while (++n <= table.n_max()) {
        const KTilde kt = k_tilde(n, q, kernel, form.weight);
        quad_err += kt.quad_err;
        const double phase = q == 1 ? 0.0
                                    : -2.0 * kPi * double((a_star * (n % q)) % q) / double(q);
        rhs += table.r(n) * Complex(std::cos(phase), std::sin(phase)) * kt.value;
        const double tau_n = double(divisors.tau(n));
        window.push_back(std::abs(kt.value) * tau_n);
        err_window.push_back(kt.quad_err * tau_n);
        if (window.size() > kWindow) {
            window.pop_front();
            err_window.pop_front();
        }
        if (double(n) > 2.0 * transition && window.size() == kWindow) {
            const double wmax = *std::max_element(window.begin(), window.end());
            const double emax = *std::max_element(err_window.begin(), err_window.end());
            if (wmax < std::max(cut_tol / double(kWindow), 6.0 * emax)) {
                cut = true;
                break;
            }
        }
    }
    if (!cut)
        fail("twisted_identity_check: dual sum not certified by n_max=" +
             std::to_string(table.n_max()) + " (insufficient coverage)");
    const double rhs_tail =
        2.0 * double(kWindow) * *std::max_element(window.begin(), window.end());

    TwistedIdentityResult out;
    out.lhs = lhs.value();
    out.rhs = chi_bar * rhs.value();
    out.rhs_tail = rhs_tail;
    out.rhs_terms = n;
    out.residual = std::abs(out.lhs - out.rhs) /
                   std::max({std::abs(out.lhs), std::abs(out.rhs), 1e-300});
    out.report.name = "voronoi_twisted_identity";
    out.report.params = "form=" + form.id + ";a=" + std::to_string(a) +
                        ";q=" + std::to_string(q) + ";kernel=" + kernel.name();
    out.report.value = out.lhs;
    out.report.set_oracle(out.rhs);
    out.report.tail_bound = rhs_tail + quad_err;
    return out;
}

SumReport bessel_mellin_check(double a, double b, int k, double c, double height_cap) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) fail("bessel_mellin_check: need a, b, c > 0");
    if (k < 1) fail("bessel_mellin_check: need k >= 1");

    // Two integrations by parts against e^{as}: boundary terms explicit,
    // remaining integrand decays like |s|^{-k-2}.
    //   H0(s) = e^{-b/s} s^{-k}
    //   H1(s) = H0'(s) = e^{-b/s} (b s^{-k-2} - k s^{-k-1})
    //   H2(s) = H1'(s) = e^{-b/s} (b^2 s^{-k-4} - (2k+2) b s^{-k-3} + k(k+1) s^{-k-2})
    const auto H0 = [&](Complex s) { return std::exp(-b / s) * std::pow(s, -k); };
    const auto H1 = [&](Complex s) {
        return std::exp(-b / s) * (b * std::pow(s, -k - 2) - double(k) * std::pow(s, -k - 1));
    };
    const auto H2 = [&](Complex s) {
        return std::exp(-b / s) *
               (b * b * std::pow(s, -k - 4) - (2.0 * k + 2.0) * b * std::pow(s, -k - 3) +
                double(k) * (k + 1.0) * std::pow(s, -k - 2));
    };

    const double tol = 1e-9;
    // Truncation height from the |H2| ~ k(k+1) y^{-k-2} tail of the twice-
    // integrated form.
    const double lead = double(k) * (k + 1.0) + (2.0 * k + 2.0) * b + b * b;
    double Y = std::pow(std::exp(a * c) * lead / (2.0 * kPi * a * a * tol / 4.0),
                        1.0 / double(k + 1));
    Y = std::min(std::max(Y, c + 10.0 * (1.0 + 1.0 / a)), height_cap);
    const double tail = std::exp(a * c) * lead * std::pow(Y, -double(k) - 1.0) /
                        (2.0 * kPi * a * a * double(k + 1));
    if (tail > tol)
        fail("bessel_mellin_check: truncation insufficient at height cap; need height " +
             std::to_string(Y));

    // Integrating by parts twice over the whole line kills the boundary at
    // +-i infinity and leaves an absolutely convergent integrand for every
    // k >= 1:  I = (1/(2 pi i a^2)) int e^{as} H0''(s) ds.
    (void)H0;
    (void)H1;
    const auto integrand = [&](double y) {
        const Complex s(c, y);
        // (1/2 pi i) e^{as} H2 / a^2 * (i dy)
        return std::exp(a * s) * H2(s) / (a * a) / (2.0 * kPi);
    };
    // oscillation scale in y is 2 pi / a; near y = 0 the e^{-b/s} factor
    // turns over on scale ~ sqrt(b/a)
    specfun::QuadratureSpec spec;
    spec.abs_tol = tol / 8.0;
    spec.rel_tol = 1e-10;
    spec.max_subdivisions = 4000;
    KahanSumComplex integral;
    double quad_err = 0.0;
    const double seg = std::max(2.0 * kPi / a, 1e-3);
    double y = -Y;
    while (y < Y) {
        const double y2 = std::min(y + seg * 64.0, Y);
        specfun::QuadratureSpec local = spec;
        local.abs_tol = tol / 8.0 * (y2 - y) / (2.0 * Y);
        const specfun::QuadResult r = specfun::integrate(integrand, y, y2, local);
        if (!r.converged) fail("bessel_mellin_check: quadrature non-convergence");
        integral += r.value;
        quad_err += r.error;
        y = y2;
    }

    const Complex value = integral.value();
    const double closed = std::pow(a / b, 0.5 * (k - 1)) *
                          specfun::bessel_j(k - 1, 2.0 * std::sqrt(a * b));

    SumReport rep;
    rep.name = "bessel_mellin";
    rep.params = "a=" + fmt_double(a) + ";b=" + fmt_double(b) + ";k=" + std::to_string(k) +
                 ";c=" + fmt_double(c) + ";height=" + fmt_double(Y);
    rep.value = value;
    rep.set_oracle(Complex(closed, 0.0));
    rep.tail_bound = tail + quad_err;
    return rep;
}

void write_residual_csv(const std::string& path, const std::vector<ResidualRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("write_residual_csv: cannot open '" + path + "'");
    out << "form,a,q,kernel,u0,u1,lhs_re,lhs_im,rhs_re,rhs_im,residual\n";
    for (const ResidualRow& r : rows)
        out << r.form << ',' << r.a << ',' << r.q << ',' << r.kernel << ','
            << fmt_double(r.u0) << ',' << fmt_double(r.u1) << ',' << fmt_double(r.lhs.real())
            << ',' << fmt_double(r.lhs.imag()) << ',' << fmt_double(r.rhs.real()) << ','
            << fmt_double(r.rhs.imag()) << ',' << fmt_double(r.residual) << '\n';
}

}  // namespace critline::voronoi
