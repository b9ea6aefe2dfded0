#include "critline/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "critline/arith.hpp"
#include "critline/compensated.hpp"
#include "critline/csv.hpp"

namespace critline::mollifier {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("mollifier: " + msg);
}

}  // namespace

MollifierTable::MollifierTable(const CoeffTable& source, double X,
                               std::vector<Entry> entries)
    : source_(&source), X_(X), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.nu < b.nu; });
}

Complex MollifierTable::alpha(std::uint64_t nu) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), nu,
                               [](const Entry& e, std::uint64_t v) { return e.nu < v; });
    return (it != entries_.end() && it->nu == nu) ? it->alpha : Complex(0.0, 0.0);
}

Complex MollifierTable::beta(std::uint64_t nu) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), nu,
                               [](const Entry& e, std::uint64_t v) { return e.nu < v; });
    return (it != entries_.end() && it->nu == nu) ? it->beta : Complex(0.0, 0.0);
}

MollifierTable build_mollifier(const CoeffTable& table, double X) {
    if (X < 3.0) fail("build_mollifier: X must be >= 3");
    if (double(table.n_max()) < X)
        fail("build_mollifier: X exceeds coefficient coverage n_max=" +
             std::to_string(table.n_max()));
    ArithCache cache(static_cast<std::uint32_t>(X));
    std::vector<std::uint32_t> primes;
    for (std::uint32_t p : cache.primes())
        if (p > 256) primes.push_back(p);

    const double lnX = std::log(X);
    std::vector<MollifierTable::Entry> entries;
    entries.push_back({1, {1.0, 0.0}, {1.0, 0.0}});

    // depth-first squarefree products of the primes in (256, X], pruned at X
    struct Frame {
        std::size_t next;
        std::uint64_t nu;
        Complex alpha;
    };
    std::vector<Frame> stack{{0, 1, {1.0, 0.0}}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        for (std::size_t i = f.next; i < primes.size(); ++i) {
            const std::uint64_t nu = f.nu * primes[i];
            if (double(nu) > X) break;  // primes ascend, so all later ones prune too
            const Complex alpha = f.alpha * (-0.5 * table.r(primes[i]));
            const double cut = 1.0 - std::log(double(nu)) / lnX;
            entries.push_back({nu, alpha, alpha * std::max(0.0, cut)});
            stack.push_back({i + 1, nu, alpha});
        }
    }
    return MollifierTable(table, X, std::move(entries));
}

Complex phi(Complex s, const MollifierTable& m) {
    KahanSumComplex acc;
    for (const auto& e : m.entries()) {
        if (e.beta == Complex(0.0, 0.0)) continue;
        acc += e.beta * std::exp(-s * std::log(double(e.nu)));
    }
    return acc.value();
}

void DetectorParams::validate() const {
    if (!(delta > 0.0 && delta < 0.1))
        fail("DetectorParams: delta must lie in (0, 1/10)");
    if (!(h1 > 0.0 && h1 < 1.0)) fail("DetectorParams: h1 must lie in (0, 1)");
    if (!(X >= 3.0)) fail("DetectorParams: X must be >= 3");
}

bool DetectorParams::outside_theorem2_regime() const {
    return std::log(delta) + 86.0 * std::log(X) + 1.0 / h1 > 0.0;
}

FrakF frak_F(double t, const CoeffTable& table, const MollifierTable& m,
             const DetectorParams& p) {
    p.validate();
    const lfunc::LambdaValue lam = lfunc::completed(table, Complex(0.5, t));
    const Complex ph = phi(Complex(0.5, t), m);
    const double phi_sq = std::norm(ph);

    FrakF out;
    out.value.log_mod = lam.value.log_mod - 0.5 * std::log(2.0 * kPi) +
                        (phi_sq > 0.0 ? std::log(phi_sq)
                                      : -std::numeric_limits<double>::infinity()) +
                        (kPi / 2.0 - p.delta) * t;
    out.value.phase = lam.value.phase;
    const double half_arg = 0.5 * std::arg(table.form().root_number);
    out.rotated_real = (out.value.log_mod == -std::numeric_limits<double>::infinity())
                           ? 0.0
                           : std::exp(out.value.log_mod) * std::cos(lam.value.phase - half_arg);
    out.rel_err = lam.rel_err + std::abs(std::sin(lam.value.phase - half_arg));
    return out;
}

void write_mollifier_csv(const std::string& path, const MollifierTable& m) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("write_mollifier_csv: cannot open '" + path + "'");
    out << "nu,alpha_re,alpha_im,beta_re,beta_im\n";
    for (const auto& e : m.entries())
        out << e.nu << ',' << fmt_double(e.alpha.real()) << ',' << fmt_double(e.alpha.imag())
            << ',' << fmt_double(e.beta.real()) << ',' << fmt_double(e.beta.imag()) << '\n';
}

}  // namespace critline::mollifier
