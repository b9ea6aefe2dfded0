#include "critline/lfunc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "critline/compensated.hpp"
#include "critline/csv.hpp"
#include "critline/specfun.hpp"

namespace critline::lfunc {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
const double kNegInf = -std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("lfunc: " + msg);
}

double principal_mod(double x) {
    x = std::fmod(x, 2.0 * kPi);
    if (x > kPi) x -= 2.0 * kPi;
    if (x <= -kPi) x += 2.0 * kPi;
    return x;
}

// Evaluator rotation: close to pi/2 so that e^{-pi t/2} is extracted
// analytically, backed off enough that the residual cancellation e^{delta t}
// stays within double-precision headroom.
double rotation_backoff(double abs_t) { return std::min(0.35, 9.0 / std::max(abs_t, 1.0)); }

struct SeriesCut {
    std::uint32_t terms;
    double tail;   // absolute bound on the dropped remainder
    double noise;  // roundoff floor of the accumulated partial sums
};

// Coefficient series along the rotated ray: g_phi(v) = sum a(n) e^{-c n v},
// c = (2 pi / sqrt(D)) e^{i phi}. Growth majorant |a(n)| <= 3.53 n^{1/3 + (k-1)/2}.
class RaySeries {
public:
    RaySeries(const CoeffTable& table, double phi)
        : table_(&table),
          n_max_(table.n_max()),
          q_(1.0 / 3.0 + 0.5 * (table.form().weight - 1)),
          c_(2.0 * kPi / std::sqrt(double(table.form().level)) *
             std::exp(std::complex<double>(0.0, phi))) {
        a_.resize(n_max_ + 1);
        for (std::uint32_t n = 1; n <= n_max_; ++n) a_[n] = table.a(n);
    }

    double decay_rate() const { return c_.real(); }  // per unit n*v
    double osc_rate() const { return std::abs(c_.imag()); }  // kernel phase rate per unit v

    Complex eval(double v, double abs_tol, SeriesCut* cut = nullptr) const {
        const Complex w = std::exp(-c_ * v);
        const double aw = std::abs(w);
        if (aw >= 1.0) fail("RaySeries: non-decaying ray");
        Complex pw = w;
        KahanSumComplex sum;
        double sum_abs = 0.0;
        std::uint32_t n = 1;
        int below = 0;
        for (; n <= n_max_; ++n) {
            const Complex term = a_[n] * pw;
            sum += term;
            sum_abs += std::abs(term);
            // majorant of everything past n; certifying below the roundoff
            // noise of the partial sums already accumulated is pointless
            const double maj = 3.53 * std::pow(double(n) + 1.0, q_) * std::abs(pw) * aw /
                               std::max(1.0 - aw, 1e-6);
            const double noise = 1e-16 * sum_abs;
            if (maj < std::max(abs_tol, 0.25 * noise)) {
                if (++below >= 2) {
                    if (cut) *cut = {n, maj, noise};
                    return sum.value();
                }
            } else {
                below = 0;
            }
            pw *= w;
        }
        const double needed =
            (std::log(3.53 / std::max(abs_tol, 1e-300)) + q_ * std::log(double(n_max_) + 1.0)) /
            std::max(v * c_.real(), 1e-12);
        fail("insufficient n_max (" + std::to_string(n_max_) + ") for ray series at v=" +
             std::to_string(v) + "; need about n_max=" + std::to_string((long)needed));
    }

private:
    const CoeffTable* table_;
    std::uint32_t n_max_;
    double q_;
    Complex c_;
    std::vector<Complex> a_;
};

struct PanelTable {
    std::vector<double> u;
    std::vector<Complex> w;  // quadrature weight x g_phi(e^u)
    double residual = 0.0;   // empirical split-test error over the probe set
    double noise = 0.0;      // integral-weighted series roundoff floor
};

// Integrand of the rotated Mellin integral in u = ln v:
//   H_s(u) = e^{(s + (k-1)/2) u} g_phi(e^u).
// Panels hold quadrature-weighted g values; evaluation multiplies in the
// exponential, so one table serves every s in the validated box.
class PanelBuilder {
public:
    PanelBuilder(const RaySeries& series, double tol_abs, double st_lo, double st_hi)
        : series_(&series), tol_(tol_abs), st_lo_(st_lo), st_hi_(st_hi) {}

    // Accumulate GL16 nodes for [ua, ub].
    void emit(PanelTable& out, double ua, double ub) const {
        const auto& xs = specfun::gl16_nodes();
        const auto& ws = specfun::gl16_weights();
        const double mid = 0.5 * (ua + ub), half = 0.5 * (ub - ua);
        for (int j = 0; j < 16; ++j) {
            const double u = mid + half * xs[j];
            SeriesCut cut{};
            out.u.push_back(u);
            out.w.push_back(half * ws[j] * series_->eval(std::exp(u), tol_ * 1e-3, &cut));
            const double wmax = std::max(std::exp(st_lo_ * u), std::exp(st_hi_ * u));
            out.noise += half * ws[j] * (cut.noise + cut.tail) * wmax;
        }
    }

    Complex quad(double ua, double ub, Complex stilde, double* noise = nullptr,
                 double* mass = nullptr) const {
        const auto& xs = specfun::gl16_nodes();
        const auto& ws = specfun::gl16_weights();
        const double mid = 0.5 * (ua + ub), half = 0.5 * (ub - ua);
        KahanSumComplex acc;
        for (int j = 0; j < 16; ++j) {
            const double u = mid + half * xs[j];
            SeriesCut cut{};
            const Complex term = half * ws[j] *
                                 series_->eval(std::exp(u), tol_ * 1e-3, &cut) *
                                 std::exp(stilde * u);
            acc += term;
            if (noise)
                *noise += half * ws[j] * (cut.noise + cut.tail) * std::exp(stilde.real() * u);
            if (mass) *mass += std::abs(term);
        }
        return acc.value();
    }

    struct ProbeDefect {
        double err;
        double floor;  // resolution floor: series noise and quadrature roundoff
    };

    // Split test at the probe exponents. A defect at the roundoff floor
    // cannot be split away, so the caller accepts it as noise.
    ProbeDefect probe_error(double ua, double ub, const std::vector<Complex>& probes) const {
        ProbeDefect out{0.0, 0.0};
        const double mid = 0.5 * (ua + ub);
        for (const Complex& st : probes) {
            double noise = 0.0, mass = 0.0;
            const Complex whole = quad(ua, ub, st, &noise, &mass);
            const Complex split = quad(ua, mid, st) + quad(mid, ub, st);
            out.err = std::max(out.err, std::abs(whole - split));
            out.floor = std::max({out.floor, 6.0 * noise, 2e-15 * mass});
        }
        return out;
    }

private:
    const RaySeries* series_;
    double tol_;
    double st_lo_, st_hi_;
};

}  // namespace

LogComplex LogComplex::from(Complex z) {
    if (z == Complex(0.0, 0.0)) return zero();
    return {std::log(std::abs(z)), std::arg(z)};
}

LogComplex LogComplex::zero() { return {kNegInf, 0.0}; }

Complex LogComplex::to_complex() const {
    if (log_mod == kNegInf) return {0.0, 0.0};
    return std::exp(log_mod) * Complex(std::cos(phase), std::sin(phase));
}

// ---------------------------------------------------------------------------
// Unfolded reference evaluator
// ---------------------------------------------------------------------------

UnfoldedEvaluator::UnfoldedEvaluator(const CoeffTable& table, double t_max,
                                     double sigma_min, double sigma_max, double tol)
    : table_(&table),
      t_max_(std::max(t_max, 1.0)),
      sigma_min_(sigma_min),
      sigma_max_(sigma_max),
      tol_(tol) {
    const int k = table.form().weight;
    const double delta = rotation_backoff(t_max_);
    phi_ = kPi / 2.0 - delta;
    RaySeries series(table, phi_);

    const double shift = 0.5 * (k - 1);
    const double st_min = sigma_min_ + shift, st_max = sigma_max_ + shift;
    // Everything is measured against the e^{-delta t} scale of the result.
    const double scale = std::exp(-delta * t_max_);
    const double thresh = tol_ * scale * 1e-3;

    // Locate the integration window empirically from the computed series;
    // no modularity assumption enters the truncation. Past the point where
    // the summed series sits at its roundoff floor there is nothing left to
    // resolve in doubles, so that also ends the window.
    auto integrand_below = [&](double u, double st) {
        SeriesCut cut{};
        const double mag =
            std::exp(st * u) * std::abs(series.eval(std::exp(u), thresh * 1e-2, &cut));
        return mag < std::max(thresh, 8.0 * std::exp(st * u) * cut.noise);
    };
    double u_hi = 0.5;
    while (u_hi < 12.0 && !integrand_below(u_hi, st_max)) u_hi += 0.25;
    u_hi += 0.25;
    double u_lo = 0.0;
    int below = 0;
    while (u_lo > -8.0) {
        u_lo -= 0.25;
        if (integrand_below(u_lo, st_min)) {
            if (++below >= 3) break;
        } else {
            below = 0;
        }
    }

    PanelBuilder builder(series, thresh, st_min, st_max);
    const double c_decay = series.decay_rate();
    std::vector<Complex> probes = {
        Complex(st_min, 0.0), Complex(st_max, 0.0), Complex(st_min, t_max_),
        Complex(st_max, t_max_), Complex(0.5 + shift, 0.6 * t_max_)};

    PanelTable tab;
    const double c_osc = series.osc_rate();
    double u = u_lo;
    while (u < u_hi) {
        // total phase + magnitude variation per unit u: the exponent itself,
        // the e^{itu} factor, and the rotated kernel's own oscillation
        const double slope = std::abs(st_max) + double(k) + t_max_ +
                             (c_decay + c_osc) * std::exp(u) + c_decay * std::exp(-u) + 1.0;
        double h = std::min(9.0 / slope, 0.5);
        h = std::min(h, u_hi - u);
        // shrink until the split test clears its share of the budget or
        // bottoms out at the series noise floor
        for (int tries = 0; tries < 12; ++tries) {
            const auto d = builder.probe_error(u, u + h, probes);
            if (d.err <= std::max(tol_ * scale * h / (u_hi - u_lo), d.floor)) break;
            h *= 0.5;
            if (h < 1e-3) break;
        }
        tab.residual += builder.probe_error(u, u + h, probes).err;
        builder.emit(tab, u, u + h);
        u += h;
    }
    nodes_u_ = std::move(tab.u);
    node_weight_ = std::move(tab.w);
    err_scale_ = (tab.residual + tab.noise) / scale + tol_;
}

LambdaValue UnfoldedEvaluator::completed(Complex s) const {
    const double t = s.imag();
    if (std::abs(t) > t_max_ + 1e-9 || s.real() < sigma_min_ - 1e-9 ||
        s.real() > sigma_max_ + 1e-9)
        fail("UnfoldedEvaluator: s outside validated box");
    if (t < -2.0)
        fail("UnfoldedEvaluator: negative ordinates beyond -2 are not supported; "
             "use conjugation symmetry");
    const int k = table_->form().weight;
    const Complex stilde = s + 0.5 * (double(k) - 1.0);
    KahanSumComplex acc;
    for (std::size_t j = 0; j < nodes_u_.size(); ++j)
        acc += node_weight_[j] * std::exp(stilde * nodes_u_[j]);
    // Lambda(s) = e^{i phi stilde} * integral; the e^{-phi t} factor lives in
    // the exponential of the log form.
    const Complex integral = acc.value();
    LogComplex lv = LogComplex::from(integral);
    lv.log_mod += -phi_ * t;
    lv.phase = principal_mod(lv.phase + phi_ * stilde.real());
    const double rel =
        err_scale_ * std::exp(-rotation_backoff(t_max_) * t_max_) /
        std::max(std::abs(integral) * std::exp(-rotation_backoff(t_max_) * t), 1e-290);
    return {lv, rel};
}

// ---------------------------------------------------------------------------
// Folded incomplete-gamma evaluator (production path)
// ---------------------------------------------------------------------------

namespace {

// F_phi(s) = sum_n a(n) (2 pi n / sqrt(D))^{-stilde} Gamma(stilde, z_n),
// z_n = (2 pi n / sqrt(D)) e^{i phi}.
Complex folded_half_sum(const CoeffTable& table, Complex s, double phi, double* rel_err) {
    const int k = table.form().weight;
    const double rootD = std::sqrt(double(table.form().level));
    const Complex stilde = s + 0.5 * (double(k) - 1.0);
    const Complex rot = std::exp(Complex(0.0, phi));
    const double q = 1.0 / 3.0 + 0.5 * (double(k) - 1.0);
    const double sin_delta = std::cos(phi);  // Re e^{i phi}
    const double x1 = 2.0 * kPi / rootD;
    KahanSumComplex acc;
    double terms_abs = 0.0;
    for (std::uint32_t n = 1; n <= table.n_max(); ++n) {
        const double x = 2.0 * kPi * double(n) / rootD;
        const Complex term = table.a(n) * std::exp(-stilde * std::log(x)) *
                             specfun::upper_gamma(stilde, x * rot);
        acc += term;
        terms_abs += std::abs(term);
        const double cur = std::abs(acc.value());
        // tail majorant from |a(m)| <= 3.53 m^q and |Gamma(st, z)| <~ 2 |z^st e^-z / z|;
        // the coefficients vanish in long runs, so observed term size alone
        // cannot justify a cut
        const double xn = x + x1;
        const double maj = 7.06 * std::pow(double(n) + 1.0, q) *
                           std::exp(-xn * sin_delta - phi * s.imag()) / xn /
                           std::max(1.0 - std::exp(-x1 * sin_delta), 1e-3);
        if (n >= 8 && maj < 1e-16 * std::max(cur, 1e-290)) {
            if (rel_err)
                *rel_err = (1e-15 * terms_abs + maj) / std::max(cur, 1e-290) + 1e-15;
            return acc.value();
        }
    }
    fail("insufficient n_max (" + std::to_string(table.n_max()) +
         ") for the folded evaluator at t=" + std::to_string(s.imag()));
}

}  // namespace

LambdaValue completed(const CoeffTable& table, Complex s) {
    if (!table.form().root_number_known)
        fail("completed: root number not computed yet (call lfunc::root_number)");
    const double t = s.imag();
    const double sgn = t < 0.0 ? -1.0 : 1.0;
    const double phi = sgn * (kPi / 2.0 - rotation_backoff(std::abs(t)));
    double e1 = 0.0, e2 = 0.0;
    const Complex f1 = folded_half_sum(table, s, phi, &e1);
    const Complex f2 = folded_half_sum(table, 1.0 - std::conj(s), phi, &e2);
    const Complex theta = table.form().root_number;
    const Complex lambda = f1 + theta * std::conj(f2);
    const double cancel =
        (std::abs(f1) + std::abs(f2)) / std::max(std::abs(lambda), 1e-290);
    return {LogComplex::from(lambda), (e1 + e2 + 1e-15) * cancel};
}

// ---------------------------------------------------------------------------

Complex root_number(CoeffTable& table) {
    UnfoldedEvaluator eval(table, 2.5, -0.1, 1.2, 1e-13);
    std::vector<Complex> probes = {{0.75, 0.40}, {0.66, 0.62}, {0.81, 0.27}};
    for (int round = 0; round < 3; ++round) {
        std::vector<Complex> thetas;
        bool degenerate = false;
        for (Complex s0 : probes) {
            const LambdaValue a = eval.completed(s0);
            const LambdaValue b = eval.completed(1.0 - std::conj(s0));
            if (a.rel_err > 1e-7 || b.rel_err > 1e-7) {
                degenerate = true;
                break;
            }
            LogComplex ratio{a.value.log_mod - b.value.log_mod,
                             principal_mod(a.value.phase + b.value.phase)};
            thetas.push_back(ratio.to_complex());
        }
        if (!degenerate) {
            bool stable = true;
            for (const Complex& th : thetas) {
                if (std::abs(th - thetas[0]) > 1e-8 || std::abs(std::abs(th) - 1.0) > 1e-8)
                    stable = false;
            }
            if (stable) {
                const Complex theta = thetas[0] / std::abs(thetas[0]);
                table.set_root_number(theta);
                return theta;
            }
        }
        for (Complex& s0 : probes) s0 += Complex(0.0, 0.13);  // step off a possible zero
    }
    fail("root_number: probes degenerate or unstable for form '" + table.form().id + "'");
}

LineSample hardy_z(const CoeffTable& table, double t) {
    const LambdaValue lam = completed(table, Complex(0.5, t));
    const double half_arg = 0.5 * std::arg(table.form().root_number);
    const double rot_phase = lam.value.phase - half_arg;
    LineSample out;
    out.t = t;
    out.lambda_log = lam.value;
    out.z = (lam.value.log_mod == kNegInf)
                ? 0.0
                : std::exp(lam.value.log_mod + 0.5 * kPi * std::abs(t)) * std::cos(rot_phase);
    out.eval_error = std::abs(std::sin(rot_phase)) + lam.rel_err;
    return out;
}

// ---------------------------------------------------------------------------
// Fast line evaluator
// ---------------------------------------------------------------------------

LineEvaluator::LineEvaluator(const CoeffTable& table, double delta_rot, double t_max,
                             double tol)
    : table_(&table), delta_rot_(delta_rot), t_max_(std::max(t_max, 1.0)), tol_(tol) {
    if (!table.form().root_number_known)
        fail("LineEvaluator: root number not computed yet");
    if (!(delta_rot > 0.0 && delta_rot < kPi / 2.0))
        fail("LineEvaluator: delta_rot must be in (0, pi/2)");
    // Integrate at a comfortable backoff and rescale analytically; a small
    // requested delta would otherwise stretch the ray integral to hundreds
    // of kernel oscillations.
    delta_int_ = std::max(delta_rot, rotation_backoff(t_max_));
    rescale_ = delta_int_ - delta_rot_;
    const int k = table.form().weight;
    const double phi = kPi / 2.0 - delta_int_;
    RaySeries series(table, phi);

    const double st = 0.5 * double(k);  // Re stilde on the line
    const double scale = std::exp(-delta_int_ * t_max_);
    const double thresh = tol_ * scale * 1e-3;
    auto integrand_mag = [&](double u) {
        return std::exp(st * u) * std::abs(series.eval(std::exp(u), thresh * 1e-2));
    };
    double u_hi = 0.5;
    while (u_hi < 12.0 && integrand_mag(u_hi) > thresh) u_hi += 0.25;
    u_hi += 0.25;

    PanelBuilder builder(series, thresh, st, st);
    const double c_decay = series.decay_rate();
    const double c_osc = series.osc_rate();
    std::vector<Complex> probes = {Complex(st, 0.0), Complex(st, 0.6 * t_max_),
                                   Complex(st, t_max_)};
    PanelTable tab;
    double u = 0.0;
    while (u < u_hi) {
        const double slope = st + t_max_ + (c_decay + c_osc) * std::exp(u) + 1.0;
        double h = std::min({9.0 / slope, 0.5, u_hi - u});
        for (int tries = 0; tries < 12; ++tries) {
            const auto d = builder.probe_error(u, u + h, probes);
            if (d.err <= std::max(tol_ * scale * h / u_hi, d.floor)) break;
            h *= 0.5;
            if (h < 1e-3) break;
        }
        tab.residual += builder.probe_error(u, u + h, probes).err;
        builder.emit(tab, u, u + h);
        u += h;
    }
    // Fold the fixed e^{(k/2) u} weight into the node weights.
    for (std::size_t j = 0; j < tab.u.size(); ++j)
        tab.w[j] *= std::exp(st * tab.u[j]);
    nodes_u_ = std::move(tab.u);
    node_weight_ = std::move(tab.w);
    abs_err_ = 3.0 * (tab.residual + tab.noise) + tol_ * scale;

    const Complex theta = table.form().root_number;
    rot_front_ = std::exp(Complex(0.0, -0.5 * std::arg(theta) + phi * st));
}

Complex LineEvaluator::line_integral(double t) const {
    KahanSumComplex acc;
    for (std::size_t j = 0; j < nodes_u_.size(); ++j) {
        const double ph = t * nodes_u_[j];
        acc += node_weight_[j] * Complex(std::cos(ph), std::sin(ph));
    }
    return acc.value();
}

double LineEvaluator::rotated_scaled(double t) const {
    if (t > t_max_ + 1e-9) fail("LineEvaluator: t beyond validated range");
    return 2.0 * std::real(rot_front_ * line_integral(t)) * std::exp(rescale_ * t);
}

double LineEvaluator::z(double t) const {
    return rotated_scaled(t) * std::exp(delta_rot_ * t);
}

double LineEvaluator::noise_floor(double t) const {
    return 2.0 * abs_err_ * std::exp(rescale_ * std::max(t, 0.0));
}

// ---------------------------------------------------------------------------
// Zero counting
// ---------------------------------------------------------------------------

namespace {

double phase_of(const UnfoldedEvaluator& ev, Complex s) {
    const LambdaValue v = ev.completed(s);
    if (v.value.log_mod == kNegInf) fail("count_zeros: contour hit an exact zero");
    return v.value.phase;
}

// Accumulated continuous phase change along the straight segment a -> b.
double track_phase(const UnfoldedEvaluator& ev, Complex a, Complex b, double phase_a,
                   double phase_b, int depth) {
    const double delta = principal_mod(phase_b - phase_a);
    if (std::abs(delta) <= kPi / 2.0) return delta;
    if (depth > 40) fail("count_zeros: phase-tracking step floor reached");
    const Complex mid = 0.5 * (a + b);
    const double phase_m = phase_of(ev, mid);
    return track_phase(ev, a, mid, phase_a, phase_m, depth + 1) +
           track_phase(ev, mid, b, phase_m, phase_b, depth + 1);
}

double refine_zero(const LineEvaluator& le, double lo, double hi, double z_lo) {
    // bisection to 1e-8 ...
    for (int it = 0; it < 80 && hi - lo > 1e-8; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double zm = le.rotated_scaled(mid);
        if ((zm < 0.0) == (z_lo < 0.0)) {
            lo = mid;
            z_lo = zm;
        } else {
            hi = mid;
        }
    }
    double gamma = 0.5 * (lo + hi);
    // ... then one Newton polish with a centered difference derivative.
    const double h = 1e-5;
    const double d = (le.rotated_scaled(gamma + h) - le.rotated_scaled(gamma - h)) / (2.0 * h);
    if (d != 0.0) {
        const double polished = gamma - le.rotated_scaled(gamma) / d;
        if (polished > lo - (hi - lo) && polished < hi + (hi - lo)) gamma = polished;
    }
    return gamma;
}

}  // namespace

ZeroReport count_zeros(const CoeffTable& table, double T, double scan_step) {
    if (T <= 0.0) fail("count_zeros: T must be positive");
    if (scan_step <= 0.0 || scan_step > 0.05)
        fail("count_zeros: scan step must be in (0, 0.05]");
    LineEvaluator le(table, rotation_backoff(T), T + 1.0);

    // Scan for sign changes on (0, T].
    ZeroReport report;
    std::vector<double> grid;
    for (double t = scan_step; t <= T + 1e-12; t += scan_step) grid.push_back(t);
    const double noise = le.noise_floor(0.0);

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        double a = grid[i], b = grid[i + 1];
        double za = le.rotated_scaled(a), zb = le.rotated_scaled(b);
        double step = b - a;
        // Ties (values below the noise floor) are resolved by shrinking the step.
        while ((std::abs(za) < noise || std::abs(zb) < noise) && step > 1e-10) {
            step *= 0.5;
            if (std::abs(za) < noise) {
                a += step;
                za = le.rotated_scaled(a);
            } else {
                b -= step;
                zb = le.rotated_scaled(b);
            }
        }
        if (za == 0.0 || zb == 0.0) continue;
        if ((za < 0.0) != (zb < 0.0)) {
            const double gamma = refine_zero(le, a, b, za);
            report.ordinates.push_back(gamma);
            report.records.push_back({grid[i], za, zb, gamma, 0.5 * (b - a) * 1e-8 + noise});
        }
    }
    std::sort(report.ordinates.begin(), report.ordinates.end());
    report.count_signs = static_cast<long>(report.ordinates.size());

    // Nudge T off any refined ordinate.
    double T_eff = T;
    for (int guard = 0; guard < 8; ++guard) {
        bool close = false;
        for (double g : report.ordinates)
            if (std::abs(g - T_eff) < 1e-3) close = true;
        if (!close) break;
        T_eff += 2e-3;
    }
    report.T = T_eff;

    // Argument principle around {0 <= sigma <= 1, 0 < t <= T_eff}.
    UnfoldedEvaluator ue(table, T_eff + 0.5, -0.05, 1.05, 1e-12);
    const std::vector<Complex> corners = {
        {0.0, 0.0}, {1.0, 0.0}, {1.0, T_eff}, {0.0, T_eff}, {0.0, 0.0}};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < corners.size(); ++i) {
        // coarse pre-splitting keeps the recursive tracker shallow
        const int pre = 1 + static_cast<int>(std::abs(corners[i + 1] - corners[i]) * 4.0);
        Complex prev = corners[i];
        double phase_prev = phase_of(ue, prev);
        for (int j = 1; j <= pre; ++j) {
            const Complex cur =
                corners[i] + (corners[i + 1] - corners[i]) * (double(j) / pre);
            const double phase_cur = phase_of(ue, cur);
            total += track_phase(ue, prev, cur, phase_prev, phase_cur, 0);
            prev = cur;
            phase_prev = phase_cur;
        }
    }
    const double winding = total / (2.0 * kPi);
    const double rounded = std::round(winding);
    if (std::abs(winding - rounded) > 0.1)
        fail("count_zeros: winding number " + std::to_string(winding) + " is not an integer");
    report.count_argument = static_cast<long>(rounded);

    if (report.count_signs > report.count_argument)
        fail("count_zeros: sign-change count exceeds argument-principle count");
    return report;
}

// ---------------------------------------------------------------------------
// Dirichlet-series values
// ---------------------------------------------------------------------------

namespace {

// Certified tail of sum_{n>N} tau(n) n^{-sigma} from d(n) <= C n^e.
double tau_tail(double sigma, double N) {
    struct Pair {
        double e, C;
    };
    static const Pair kFamily[] = {{0.5, 2.0}, {1.0 / 3.0, 3.53}, {0.2, 28.0}};
    double best = std::numeric_limits<double>::infinity();
    for (auto [e, C] : kFamily) {
        if (sigma > 1.0 + e + 1e-9)
            best = std::min(best, C * std::pow(N, 1.0 + e - sigma) / (sigma - 1.0 - e));
    }
    return best;
}

}  // namespace

LResult l_value(const CoeffTable& table, Complex s, std::uint32_t max_terms, double tol) {
    const double sigma = s.real();
    if (sigma <= 0.5)
        throw std::domain_error("lfunc: l_value requires Re s > 1/2 (completed() covers the strip)");
    if (sigma > 1.0) {
        std::uint32_t N = table.n_max();
        if (max_terms > 0) N = std::min(N, max_terms);
        const double tail = tau_tail(sigma, double(N));
        if (max_terms == 0 && tail > tol) {
            // invert the best family member for the required length
            double needed = std::numeric_limits<double>::infinity();
            for (double e : {0.5, 1.0 / 3.0, 0.2}) {
                if (sigma > 1.0 + e + 1e-9) {
                    const double C = e == 0.5 ? 2.0 : (e > 0.25 ? 3.53 : 28.0);
                    needed = std::min(
                        needed, std::pow(tol * (sigma - 1.0 - e) / C, 1.0 / (1.0 + e - sigma)));
                }
            }
            fail("l_value: insufficient n_max=" + std::to_string(table.n_max()) +
                 " for tolerance; need about n_max=" + std::to_string((long)std::ceil(needed)));
        }
        KahanSumComplex acc;
        for (std::uint32_t n = 1; n <= N; ++n)
            acc += table.r(n) * std::exp(-s * std::log(double(n)));
        return {acc.value(), tail};
    }
    // 1/2 < sigma <= 1: divide the gamma/exponential prefactor back out of
    // the folded completed value.
    const LambdaValue lam = completed(table, s);
    const int k = table.form().weight;
    const Complex stilde = s + 0.5 * (double(k) - 1.0);
    const Complex lg = specfun::log_gamma(stilde);
    const double logA = std::log(std::sqrt(double(table.form().level)) / (2.0 * kPi));
    LogComplex lval{lam.value.log_mod - lg.real() - logA * stilde.real(),
                    principal_mod(lam.value.phase - lg.imag() - logA * stilde.imag())};
    const Complex value = lval.to_complex();
    return {value, lam.rel_err * std::abs(value)};
}

Complex l_value_abel(const CoeffTable& table, Complex s, int levels, double eps0) {
    if (levels < 2) throw std::invalid_argument("lfunc: l_value_abel needs >= 2 levels");
    // keep the smallest abscissa resolvable by the table
    while (levels > 2 && eps0 * std::pow(0.5, levels - 1) * table.n_max() < 40.0) --levels;
    std::vector<double> eps(levels);
    std::vector<Complex> val(levels, Complex(0.0, 0.0));
    for (int j = 0; j < levels; ++j) eps[j] = eps0 * std::pow(0.5, j);
    std::vector<KahanSumComplex> acc(levels);
    std::vector<Complex> w(levels), pw(levels);
    for (int j = 0; j < levels; ++j) {
        w[j] = std::exp(Complex(-eps[j], 0.0));
        pw[j] = 1.0;
    }
    for (std::uint32_t n = 1; n <= table.n_max(); ++n) {
        const Complex base = table.r(n) * std::exp(-s * std::log(double(n)));
        for (int j = 0; j < levels; ++j) {
            pw[j] *= w[j];
            acc[j] += base * pw[j];
        }
    }
    for (int j = 0; j < levels; ++j) val[j] = acc[j].value();
    // Neville extrapolation to eps = 0.
    for (int m = 1; m < levels; ++m)
        for (int j = levels - 1; j >= m; --j)
            val[j] = val[j] + (val[j] - val[j - 1]) * eps[j] / (eps[j - m] - eps[j]);
    return val[levels - 1];
}

void write_zero_csv(const std::string& path, const ZeroReport& report) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("write_zero_csv: cannot open '" + path + "'");
    out << "t,z_left,z_right,refined,err\n";
    for (const ZeroRecord& r : report.records)
        out << fmt_double(r.t) << ',' << fmt_double(r.z_left) << ',' << fmt_double(r.z_right)
            << ',' << fmt_double(r.refined) << ',' << fmt_double(r.err) << '\n';
}

}  // namespace critline::lfunc
