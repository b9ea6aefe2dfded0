#include "critline/detector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "critline/arith.hpp"
#include "critline/compensated.hpp"
#include "critline/csv.hpp"
#include "critline/specfun.hpp"

namespace critline::detector {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("detector: " + msg);
}

using Complex = std::complex<double>;

// Shared machinery for G(y): tau table, mollifier support pairs, kernel rates.
class GEngine {
public:
    GEngine(const CoeffTable& table, const MollifierTable& m, const DetectorParams& p)
        : table_(&table), m_(&m), p_(p), rootD_(std::sqrt(double(table.form().level))) {
        p_.validate();
        tau_.assign(table.n_max() + 1, 0);
        for (std::uint32_t d = 1; d <= table.n_max(); ++d)
            for (std::uint32_t n = d; n <= table.n_max(); n += d) ++tau_[n];
        for (const auto& e : m.entries())
            if (e.beta != Complex(0.0, 0.0)) support_.push_back(e);
        if (support_.empty()) fail("GEngine: empty mollifier support");
        max_nu_ = support_.back().nu;
        kernel_ = Complex(std::sin(p_.delta), std::cos(p_.delta));
    }

    // Slowest exponential decay rate of G in y (squared modulus doubles it).
    double decay_rate() const {
        return 2.0 * 2.0 * kPi * std::sin(p_.delta) / (rootD_ * double(max_nu_));
    }

    GValue eval(double y, double tol) const {
        if (y < 1.0) fail("g_of_y: y must be >= 1");
        KahanSumComplex sum;
        KahanSum majorant;
        double tail = 0.0;
        const double pair_tol = tol / double(support_.size() * support_.size());
        for (const auto& e1 : support_) {
            for (const auto& e2 : support_) {
                const Complex coef = e1.beta * std::conj(e2.beta) / double(e2.nu);
                const double rate = 2.0 * kPi * double(e1.nu) * y / (rootD_ * double(e2.nu));
                const Complex w = std::exp(-rate * kernel_);
                const double aw = std::abs(w);
                Complex pw = w;
                KahanSumComplex inner;
                KahanSum inner_maj;
                bool cut_ok = false;
                for (std::uint32_t n = 1; n <= table_->n_max(); ++n) {
                    inner += table_->r(n) * pw;
                    inner_maj += double(tau_[n]) * std::abs(pw);
                    const double rem = 3.53 * std::pow(double(n) + 1.0, 1.0 / 3.0) *
                                       std::abs(pw) * aw / std::max(1.0 - aw, 1e-9);
                    if (rem * std::abs(coef) < pair_tol) {
                        tail += rem * std::abs(coef);
                        cut_ok = true;
                        break;
                    }
                    pw *= w;
                }
                if (!cut_ok) {
                    const double needed = std::log(3.53 * std::abs(coef) /
                                                   std::max(pair_tol, 1e-300)) /
                                          std::max(rate * std::sin(p_.delta), 1e-12);
                    fail("g_of_y: tolerance unachievable with n_max=" +
                         std::to_string(table_->n_max()) + " (delta*y too small); need about " +
                         std::to_string((long)needed) + " terms");
                }
                sum += coef * inner.value();
                majorant += std::abs(coef) * inner_maj.value();
            }
        }
        const double s_abs = std::abs(sum.value());
        GValue out;
        out.value = s_abs * s_abs;
        out.majorant = majorant.value() * majorant.value();
        out.tail = 2.0 * s_abs * tail + tail * tail;
        return out;
    }

private:
    const CoeffTable* table_;
    const MollifierTable* m_;
    DetectorParams p_;
    double rootD_;
    std::vector<std::uint32_t> tau_;
    std::vector<MollifierTable::Entry> support_;
    std::uint64_t max_nu_ = 1;
    Complex kernel_;  // sin(delta) + i cos(delta)
};

// Rotated detector function on the fast line evaluator, with delta_rot
// matched to the detector's delta so that no rescaling is needed:
// theta^{-1/2} frak F(t) = (2 pi)^{-1/2} U(t) |phi(1/2+it)|^2.
class FrakLine {
public:
    FrakLine(const CoeffTable& table, const MollifierTable& m, const DetectorParams& p,
             double t_max)
        : le_(table, p.delta, t_max), m_(&m) {}

    double operator()(double t) const {
        const Complex ph = mollifier::phi(Complex(0.5, t), *m_);
        return le_.rotated_scaled(t) * std::norm(ph) / std::sqrt(2.0 * kPi);
    }

    double noise(double t) const {
        const Complex ph = mollifier::phi(Complex(0.5, t), *m_);
        return le_.noise_floor(t) * std::norm(ph) / std::sqrt(2.0 * kPi) + 1e-300;
    }

    const lfunc::LineEvaluator& line() const { return le_; }

private:
    lfunc::LineEvaluator le_;
    const MollifierTable* m_;
};

struct WindowIntegrals {
    double I1, I2, err;
    bool ok;
};

WindowIntegrals window_integrals(const FrakLine& frak, double t, double h1) {
    specfun::QuadratureSpec spec;
    spec.abs_tol = 1e-11 * (1.0 + std::abs(frak(t))) * 2.0 * h1;
    spec.rel_tol = 1e-8;
    spec.max_subdivisions = 400;
    const auto abs_f = [&](double u) { return Complex(std::abs(frak(t + u)), 0.0); };
    const auto raw_f = [&](double u) { return Complex(frak(t + u), 0.0); };
    const specfun::QuadResult r1 = specfun::integrate(abs_f, -h1, h1, spec);
    const specfun::QuadResult r2 = specfun::integrate(raw_f, -h1, h1, spec);
    return {r1.value.real(), std::abs(r2.value.real()), r1.error + r2.error,
            r1.converged && r2.converged};
}

int count_sign_changes(const FrakLine& frak, double lo, double hi, double coarse) {
    int changes = 0;
    double prev_t = lo;
    double prev = frak(prev_t);
    for (double t = lo + coarse; t <= hi + 1e-12; t += coarse) {
        const double cur = frak(t);
        if (std::abs(prev) > frak.noise(prev_t) && std::abs(cur) > frak.noise(t) &&
            (prev < 0.0) != (cur < 0.0))
            ++changes;
        prev = cur;
        prev_t = t;
    }
    return changes;
}

}  // namespace

DetectionReport detect_intervals(const CoeffTable& table, const MollifierTable& m,
                                 const DetectorParams& p, double T, double step) {
    p.validate();
    if (T <= 1.0) fail("detect_intervals: T must exceed 1");
    if (step > p.h1 / 4.0 + 1e-12)
        fail("detect_intervals: resolution condition step <= h1/4 violated");

    FrakLine frak(table, m, p, T + p.h1 + 1.0);
    DetectionReport report;
    report.params = p;
    report.T = T;
    report.step = step;
    report.regime_flagged = p.outside_theorem2_regime();

    const double eps_rel = 1e-6;
    KahanSum i3, i1_sq, i2_sq, i2_total, i1_e1;
    long n_e1 = 0;
    for (double t = 1.0 + step; t < T; t += step) {
        const WindowIntegrals w = window_integrals(frak, t, p.h1);
        PointRecord rec{t, w.I1, w.I2, w.err, PointFlag::Indeterminate, 0};
        if (w.ok) {
            const bool strict = w.I1 > w.I2 * (1.0 + eps_rel) + w.err;
            rec.flag = strict ? PointFlag::E1 : PointFlag::E2;
            if (strict) {
                rec.confirmations =
                    count_sign_changes(frak, t - p.h1, t + p.h1, p.h1 / 50.0);
                ++n_e1;
                i1_e1 += w.I1 * step;
            }
        }
        report.points.push_back(rec);
        i3 += w.I1 * step;
        i2_total += w.I2 * step;
        i1_sq += w.I1 * w.I1 * step;
        i2_sq += w.I2 * w.I2 * step;
    }
    report.mu_E1 = double(n_e1) * step;
    report.n0_bound = report.mu_E1 / (2.0 * p.h1) - 1.0;
    report.direct_sign_changes = count_sign_changes(frak, step, T, p.h1 / 8.0);

    report.budget.I3 = i3.value();
    report.budget.I1_over_E1 = i1_e1.value();
    report.budget.I2_total = i2_total.value();
    report.budget.int_I1_sq = i1_sq.value();
    report.budget.int_I2_sq = i2_sq.value();
    report.budget.cauchy_schwarz_I1 = std::sqrt(report.mu_E1 * report.budget.int_I1_sq);
    report.budget.cauchy_schwarz_I2 = std::sqrt((T - 1.0) * report.budget.int_I2_sq);
    return report;
}

GValue g_of_y(double y, const CoeffTable& table, const MollifierTable& m,
              const DetectorParams& p, double tol) {
    return GEngine(table, m, p).eval(y, tol);
}

GProfile g_profile(const std::vector<double>& ys, const CoeffTable& table,
                   const MollifierTable& m, const DetectorParams& p, double tol) {
    GEngine engine(table, m, p);
    GProfile profile;
    for (double y : ys) {
        const GValue g = engine.eval(y, tol);
        profile.push_back({y, g.value, g.majorant, g.tail});
    }
    return profile;
}

JResult j_integral(double x, double vartheta, const CoeffTable& table,
                   const MollifierTable& m, const DetectorParams& p, double tol) {
    if (!(vartheta > 0.0 && vartheta <= 0.25))
        fail("j_integral: vartheta must lie in (0, 1/4]");
    if (x < 1.0) fail("j_integral: x must be >= 1");
    GEngine engine(table, m, p);
    const double rate = engine.decay_rate();
    const double g0 = engine.eval(x, tol * 1e-3).value * std::pow(x, -vartheta);
    double cut = x + 2.0 / rate;
    if (g0 > 0.0)
        cut = std::max(cut, x + std::log(20.0 * g0 / (tol * rate)) / rate);
    const auto f = [&](double u) {
        return Complex(engine.eval(u, tol * 1e-3).value * std::pow(u, -vartheta), 0.0);
    };
    specfun::QuadratureSpec spec;
    spec.abs_tol = tol;
    spec.rel_tol = 1e-7;
    spec.max_subdivisions = 2000;
    const specfun::QuadResult r = specfun::integrate(f, x, cut, spec);
    if (!r.converged) fail("j_integral: quadrature failed to converge");
    JResult out;
    out.value = r.value.real();
    out.quad_err = r.error;
    out.tail_bound = engine.eval(cut, tol * 1e-3).value * std::pow(cut, -vartheta) / rate * 2.0;
    out.cutoff = cut;
    return out;
}

Lemma1Report lemma1_truncated_check(const CoeffTable& table, const MollifierTable& m,
                                    const DetectorParams& p, double T0) {
    p.validate();
    if (T0 <= 0.0) fail("lemma1_truncated_check: T0 must be positive");
    FrakLine frak(table, m, p, T0 + p.h1 + 1.0);
    GEngine engine(table, m, p);

    specfun::QuadratureSpec outer;
    outer.abs_tol = 1e-9;
    outer.rel_tol = 1e-6;
    outer.max_subdivisions = 3000;

    const auto i1sq = [&](double t) {
        const WindowIntegrals w = window_integrals(frak, t, p.h1);
        return Complex(w.I1 * w.I1, 0.0);
    };
    const auto i2sq = [&](double t) {
        const WindowIntegrals w = window_integrals(frak, t, p.h1);
        return Complex(w.I2 * w.I2, 0.0);
    };
    const specfun::QuadResult L1 = specfun::integrate(i1sq, -T0, T0, outer);
    const specfun::QuadResult L2 = specfun::integrate(i2sq, -T0, T0, outer);

    const double rate = engine.decay_rate();
    const double H = std::exp(1.0 / p.h1);
    const double g1 = engine.eval(1.0, 1e-12).value;
    double Y = 1.0 + 2.0 / rate;
    if (g1 > 0.0) Y = std::max(Y, 1.0 + std::log(1e8 * g1 / rate) / rate);
    Y = std::max(Y, H + 1.0);

    const auto g_f = [&](double y) { return Complex(engine.eval(y, 1e-12).value, 0.0); };
    const auto g_over_log2 = [&](double y) {
        const double ly = std::log(y);
        return Complex(engine.eval(y, 1e-12).value / (ly * ly), 0.0);
    };
    specfun::QuadratureSpec gspec;
    gspec.abs_tol = 1e-10;
    gspec.rel_tol = 1e-7;
    gspec.max_subdivisions = 3000;
    const specfun::QuadResult G_1Y = specfun::integrate(g_f, 1.0, Y, gspec);
    const specfun::QuadResult G_1H = specfun::integrate(g_f, 1.0, H, gspec);
    const specfun::QuadResult G_HY = specfun::integrate(g_over_log2, H, Y, gspec);
    const double g_tail = engine.eval(Y, 1e-12).value / rate * 2.0;

    Lemma1Report rep;
    rep.lhs1 = L1.value.real();
    rep.lhs2 = L2.value.real();
    rep.lhs_quad_err = L1.error + L2.error;
    rep.H = H;
    rep.Y = Y;
    rep.g_tail_bound = g_tail;
    rep.rhs1 = 8.0 * p.h1 * p.h1 * (G_1Y.value.real() + g_tail);
    rep.rhs2 = 8.0 * p.h1 * p.h1 * G_1H.value.real() + 8.0 * (G_HY.value.real() + g_tail);
    rep.holds1 = rep.lhs1 <= rep.rhs1 + rep.lhs_quad_err;
    rep.holds2 = rep.lhs2 <= rep.rhs2 + rep.lhs_quad_err;
    return rep;
}

void write_detection_csv(const std::string& path, const DetectionReport& report) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("write_detection_csv: cannot open '" + path + "'");
    out << "t,I1,I2,flag,confirmations\n";
    for (const PointRecord& r : report.points) {
        const char* flag = r.flag == PointFlag::E1   ? "E1"
                           : r.flag == PointFlag::E2 ? "E2"
                                                     : "indeterminate";
        out << fmt_double(r.t) << ',' << fmt_double(r.I1) << ',' << fmt_double(r.I2) << ','
            << flag << ',' << r.confirmations << '\n';
    }
}

void write_gprofile_csv(const std::string& path, const GProfile& profile) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("write_gprofile_csv: cannot open '" + path + "'");
    out << "y,G,majorant,tail_bound\n";
    for (const GProfilePoint& p : profile)
        out << fmt_double(p.y) << ',' << fmt_double(p.G) << ',' << fmt_double(p.majorant)
            << ',' << fmt_double(p.tail_bound) << '\n';
}

}  // namespace critline::detector
