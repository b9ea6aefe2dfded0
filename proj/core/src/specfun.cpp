#include "critline/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace critline::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Lanczos approximation, g = 7, 9 terms.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

// ln sin(pi z), branch continuous off the real integers.
Complex log_sin_pi(Complex z) {
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}), |e^{2 pi i z}| <= 1 here
    const Complex i(0.0, 1.0);
    return std::log(0.5) + i * (kPi / 2.0) - i * kPi * z +
           std::log(1.0 - std::exp(2.0 * kPi * i * z));
}

}  // namespace

Complex log_gamma(Complex s) {
    if (s.real() < 0.5) {
        const double ip = s.imag() == 0.0 ? std::round(s.real()) : 0.0;
        if (s.imag() == 0.0 && s.real() == ip && ip <= 0.0)
            throw std::domain_error("specfun: log_gamma pole at non-positive integer");
        return std::log(kPi) - log_sin_pi(s) - log_gamma(1.0 - s);
    }
    const Complex z = s - 1.0;
    Complex x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
    const Complex t = z + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

namespace {

double bessel_series(int m, double x) {
    const double h = 0.5 * x;
    double term = 1.0;
    for (int j = 1; j <= m; ++j) term *= h / j;
    double sum = term;
    const double h2 = h * h;
    for (int j = 1; j <= 60; ++j) {
        term *= -h2 / (double(j) * (m + j));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

double bessel_miller(int m, double x) {
    int start = static_cast<int>(x + 30.0 * std::cbrt(x) + 40.0);
    start = std::max(start, m + 20);
    if (start % 2 != 0) ++start;
    double bjp = 0.0, bj = 1e-30, norm = 0.0, res = 0.0;
    for (int j = start; j >= 1; --j) {
        const double bjm = (2.0 * j / x) * bj - bjp;
        bjp = bj;
        bj = bjm;
        if (std::abs(bj) > 1e250) {
            bj *= 1e-250;
            bjp *= 1e-250;
            norm *= 1e-250;
            res *= 1e-250;
        }
        const int order = j - 1;
        if (order == m) res = bj;
        if (order == 0)
            norm += bj;
        else if (order % 2 == 0)
            norm += 2.0 * bj;
    }
    return res / norm;
}

double bessel_asymptotic(int m, double x) {
    const double mu = 4.0 * double(m) * double(m);
    double p = 1.0, q = 0.0, a = 1.0;
    for (int j = 1; j <= 30; ++j) {
        const double num = mu - double(2 * j - 1) * double(2 * j - 1);
        const double next = a * num / (double(j) * 8.0 * x);
        if (std::abs(next) >= std::abs(a)) break;  // asymptotic series turned
        a = next;
        if (j % 2 == 1)
            q += (j % 4 == 1) ? a : -a;
        else
            p += (j % 4 == 2) ? -a : a;
        if (std::abs(a) < 1e-18) break;
    }
    const long double chi_full =
        static_cast<long double>(x) - (0.5L * m + 0.25L) * 3.141592653589793238462643383279503L;
    const long double two_pi = 6.283185307179586476925286766559006L;
    const double chi = static_cast<double>(std::fmod(chi_full, two_pi));
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(int m, double x) {
    if (m < 0) throw std::domain_error("specfun: bessel_j needs order m >= 0");
    if (x < 0.0) throw std::domain_error("specfun: bessel_j needs x >= 0");
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;
    if (x <= 9.0) return bessel_series(m, x);
    if (x < 1200.0) return bessel_miller(m, x);
    return bessel_asymptotic(m, x);
}

namespace {

// Gauss-Kronrod 7-15 (positive Kronrod nodes; odd indices are the Gauss nodes).
constexpr double kKNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kKWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
    Complex value;
    double error;
};

PanelEstimate gk15(const std::function<Complex(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const Complex fc = f(c);
    Complex kron = kKWeights[7] * fc;
    Complex gauss = kGWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const Complex fsum = f(c - h * kKNodes[i]) + f(c + h * kKNodes[i]);
        kron += kKWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGWeights[i / 2] * fsum;
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss) + 1e-18 * std::abs(kron)};
}

struct Segment {
    double a, b;
    Complex value;
    double error;
};

struct SegmentWorse {
    bool operator()(const Segment& x, const Segment& y) const { return x.error < y.error; }
};

}  // namespace

QuadResult integrate(const std::function<Complex(double)>& f, double a, double b,
                     const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1 ||
        spec.initial_panels < 1)
        throw std::invalid_argument("specfun: invalid QuadratureSpec");
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> heap;
    Complex total(0.0, 0.0);
    double toterr = 0.0;
    const int panels = std::min(spec.initial_panels, spec.max_subdivisions + 1);
    for (int i = 0; i < panels; ++i) {
        const double pa = a + (b - a) * double(i) / panels;
        const double pb = a + (b - a) * double(i + 1) / panels;
        auto est = gk15(f, pa, pb);
        heap.push({pa, pb, est.value, est.error});
        total += est.value;
        toterr += est.error;
    }
    int splits = 0;
    while (splits < spec.max_subdivisions) {
        if (toterr <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) break;
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval at rounding floor
            heap.push(worst);
            break;
        }
        auto left = gk15(f, worst.a, mid);
        auto right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        toterr += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
        ++splits;
    }
    out.value = total;
    out.error = toterr;
    out.subdivisions = splits;
    out.converged = toterr <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    return out;
}

QuadResult integrate_to_inf(const std::function<Complex(double)>& f, double a,
                            DecayCertificate decay, const QuadratureSpec& spec) {
    if (!(decay.rate > 0.0))
        throw std::invalid_argument("specfun: decay certificate needs positive rate");
    // Estimate the envelope constant M with |f(x)| <= M e^{-rate(x-a)}.
    double envelope = 0.0;
    for (int k = 0; k <= 8; ++k) {
        const double x = a + 0.5 * k / decay.rate;
        envelope = std::max(envelope, std::abs(f(x)) * std::exp(decay.rate * (x - a)));
    }
    const double tail_target = spec.abs_tol / 10.0;
    double cut = a + 2.0 / decay.rate;
    if (envelope > 0.0)
        cut = std::max(cut, a + std::log(10.0 * envelope / (tail_target * decay.rate)) /
                                    decay.rate);
    QuadResult r = integrate(f, a, cut, spec);
    r.tail_bound = envelope * std::exp(-decay.rate * (cut - a)) / decay.rate;
    r.error += r.tail_bound;
    r.converged = r.converged && r.tail_bound <= spec.abs_tol;
    return r;
}

Complex require_converged(const QuadResult& r, const char* what) {
    if (!r.converged)
        throw std::runtime_error(std::string("specfun: quadrature failed to converge in ") +
                                 what + " (error estimate " + std::to_string(r.error) + ")");
    return r.value;
}

namespace {

Complex upper_gamma_cf(Complex a, Complex z) {
    // Lentz's algorithm on the standard continued fraction for Gamma(a,z).
    const double tiny = 1e-300;
    Complex b = z + 1.0 - a;
    Complex c = 1.0 / tiny;
    Complex d = 1.0 / b;
    Complex h = d;
    for (int i = 1; i <= 10000; ++i) {
        const Complex an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const Complex delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            return std::exp(-z + a * std::log(z)) * h;
    }
    throw std::runtime_error("specfun: upper_gamma continued fraction did not converge");
}

}  // namespace

Complex upper_gamma(Complex a, Complex z) {
    const double za = std::abs(z), aa = std::abs(a);
    if (za >= 1.3 * aa + 20.0) return upper_gamma_cf(a, z);

    // Bridge along the constant-argument ray through z (the integrand decays
    // monotonically there; a straight chord to the real axis would climb
    // through an exponentially larger saddle and cancel catastrophically),
    // then hand over to the continued fraction at radius R.
    const double R = 1.3 * aa + 30.0;
    const Complex dirn = z / za;
    auto integrand = [&](double rho) {
        const Complex t = dirn * rho;
        return dirn * std::exp((a - 1.0) * std::log(t) - t);
    };
    double peak = 0.0;
    for (int k = 0; k <= 32; ++k)
        peak = std::max(peak, std::abs(integrand(za + (R - za) * k / 32.0)));
    const double cycles = (std::abs(a.imag()) * (std::log(R) - std::log(za)) +
                           (R - za) * std::abs(dirn.imag())) /
                          (2.0 * kPi);
    QuadratureSpec spec;
    spec.abs_tol = std::max(peak * (R - za), 1e-280) * 1e-15;
    spec.rel_tol = 1e-13;
    spec.max_subdivisions = 6000;
    spec.initial_panels = std::max(8, static_cast<int>(2.0 * cycles) + 1);
    const QuadResult r = integrate(integrand, za, R, spec);
    return require_converged(r, "upper_gamma bridge") + upper_gamma_cf(a, dirn * R);
}

namespace {

constexpr std::array<double, 16> kGl16Nodes = {
    -0.989400934991649932596154173450333, -0.944575023073232576077988415534608,
    -0.865631202387831743880467897712393, -0.755404408355003033895101194847442,
    -0.617876244402643748446671764048791, -0.458016777657227386342419442983578,
    -0.281603550779258913230460501460496, -0.095012509837637440185319335424958,
    0.095012509837637440185319335424958,  0.281603550779258913230460501460496,
    0.458016777657227386342419442983578,  0.617876244402643748446671764048791,
    0.755404408355003033895101194847442,  0.865631202387831743880467897712393,
    0.944575023073232576077988415534608,  0.989400934991649932596154173450333};
constexpr std::array<double, 16> kGl16Weights = {
    0.027152459411754094851780572456018, 0.062253523938647892862843836994378,
    0.095158511682492784809925107602246, 0.124628971255533872052476282192016,
    0.149595988816576732081501730547478, 0.169156519395002538189312079030360,
    0.182603415044923588866763667969220, 0.189450610455068496285396723208283,
    0.189450610455068496285396723208283, 0.182603415044923588866763667969220,
    0.169156519395002538189312079030360, 0.149595988816576732081501730547478,
    0.124628971255533872052476282192016, 0.095158511682492784809925107602246,
    0.062253523938647892862843836994378, 0.027152459411754094851780572456018};
constexpr std::array<double, 8> kGl8Nodes = {
    -0.960289856497536231683560868569473, -0.796666477413626739591553936475830,
    -0.525532409916328985817739049189246, -0.183434642495649804939476142360184,
    0.183434642495649804939476142360184,  0.525532409916328985817739049189246,
    0.796666477413626739591553936475830,  0.960289856497536231683560868569473};
constexpr std::array<double, 8> kGl8Weights = {
    0.101228536290376259152531354309962, 0.222381034453374470544355994426241,
    0.313706645877887287337962201986601, 0.362683783378361982965150449277196,
    0.362683783378361982965150449277196, 0.313706645877887287337962201986601,
    0.222381034453374470544355994426241, 0.101228536290376259152531354309962};

}  // namespace

const std::array<double, 16>& gl16_nodes() { return kGl16Nodes; }
const std::array<double, 16>& gl16_weights() { return kGl16Weights; }
const std::array<double, 8>& gl8_nodes() { return kGl8Nodes; }
const std::array<double, 8>& gl8_weights() { return kGl8Weights; }

}  // namespace critline::specfun
