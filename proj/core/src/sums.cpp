#include "critline/sums.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "critline/arith.hpp"
#include "critline/compensated.hpp"
#include "critline/csv.hpp"

namespace critline::sums {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("sums: " + msg);
}

std::vector<std::pair<std::uint64_t, int>> factor_by_trial(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> f;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int a = 0;
            while (n % p == 0) {
                n /= p;
                ++a;
            }
            f.emplace_back(p, a);
        }
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

// r(p^j) for j = 0..count-1 via the Hecke recurrence from r(p).
std::vector<Complex> prime_power_r(const CoeffTable& table, std::uint64_t p, int count) {
    if (p > table.n_max())
        fail("prime " + std::to_string(p) + " outside coefficient coverage");
    std::vector<Complex> r(count);
    const Complex rp = table.r(p);
    const double chi = table.form().chi.value_int(static_cast<std::int64_t>(p));
    r[0] = 1.0;
    if (count > 1) r[1] = rp;
    for (int j = 2; j < count; ++j) r[j] = rp * r[j - 1] - chi * r[j - 2];
    return r;
}

constexpr int kSeriesCap = 48;

struct LocalSeries {
    Complex num;  // sum_j conj(r(p^{alpha+j})) r(p^j) p^{-js}
    Complex den;  // sum_j |r(p^j)|^2 p^{-js}
    double tail;
};

LocalSeries local_series(const CoeffTable& table, std::uint64_t p, int alpha, Complex s) {
    const auto r = prime_power_r(table, p, kSeriesCap + alpha + 1);
    const Complex ps = std::exp(-s * std::log(double(p)));
    const double aps = std::abs(ps);
    LocalSeries out{{0.0, 0.0}, {0.0, 0.0}, 0.0};
    Complex pw{1.0, 0.0};
    for (int j = 0; j < kSeriesCap; ++j) {
        out.num += std::conj(r[alpha + j]) * r[j] * pw;
        out.den += std::norm(r[j]) * pw;
        pw *= ps;
        // |r(p^j)| <= j+1 makes the remainder geometric
        const double maj =
            double(j + 2) * double(alpha + j + 2) * std::abs(pw) / std::max(1.0 - aps, 0.5);
        if (maj < 1e-16) {
            out.tail = maj;
            return out;
        }
    }
    fail("local_series: geometric cut not reached (Re s too small?)");
}

}  // namespace

std::uint64_t tau6(std::uint64_t m) {
    std::uint64_t result = 1;
    for (auto [p, a] : factor_by_trial(m)) {
        (void)p;
        std::uint64_t binom = 1;
        for (int j = 1; j <= 5; ++j) binom = binom * (a + j) / j;
        result *= binom;
    }
    return result;
}

KFactorResult k_factor(std::uint64_t m, Complex s, const CoeffTable& table) {
    if (m == 0) fail("k_factor: m must be positive");
    if (s.real() < 0.5 - 1e-12)
        fail("k_factor: series form requires Re s >= 1/2");
    const auto factors = factor_by_trial(m);
    for (auto [p, a] : factors) {
        (void)a;
        if (p <= 256)
            fail("k_factor: m=" + std::to_string(m) +
                 " has a prime factor <= 256 (outside the mollifier support)");
    }

    KFactorResult out{{1.0, 0.0}, {0.0, 0.0}, 0.0};
    for (auto [p, a] : factors) {
        const LocalSeries loc = local_series(table, p, a, s);
        if (std::abs(loc.den) < 0.2)
            fail("k_factor: local denominator nearly vanished at p=" + std::to_string(p));
        out.method_a *= loc.num / loc.den;
        out.tail_bound += loc.tail;
    }

    // Method B: truncated sums over the m-smooth integers.
    std::vector<std::vector<Complex>> rpows;
    std::vector<Complex> psinv;
    for (auto [p, a] : factors) {
        rpows.push_back(prime_power_r(table, p, kSeriesCap + a + 1));
        psinv.push_back(std::exp(-s * std::log(double(p))));
    }
    KahanSumComplex num, den;
    // depth-first over exponent vectors
    struct Frame {
        std::size_t idx;
        Complex rk;      // r(k)
        Complex rmk;     // r(m k)
        Complex ks;      // k^{-s}
        double scale;    // termwise majorant scale
    };
    std::vector<Frame> stack{{0, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, 1.0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.idx == factors.size()) {
            num += std::conj(f.rmk) * f.rk * f.ks;
            den += std::norm(f.rk) * f.ks;
            continue;
        }
        const auto [p, a] = factors[f.idx];
        const auto& rp = rpows[f.idx];
        Complex pw{1.0, 0.0};
        for (int j = 0; j < kSeriesCap; ++j) {
            const double maj = f.scale * double(j + 1) * double(a + j + 1) * std::abs(pw);
            if (maj < 1e-17 && j > 0) break;
            stack.push_back({f.idx + 1, f.rk * rp[j], f.rmk * rp[a + j], f.ks * pw,
                             f.scale * std::abs(pw)});
            pw *= psinv[f.idx];
        }
    }
    if (std::abs(den.value()) < 0.2)
        fail("k_factor: method-B denominator nearly vanished for m=" + std::to_string(m));
    out.method_b = num.value() / den.value();
    return out;
}

namespace {

// K-factor memoized per (call, s); s is fixed inside each Selberg sum.
class KCache {
public:
    KCache(const CoeffTable& table, Complex s) : table_(&table), s_(s) {}
    Complex get(std::uint64_t m) {
        if (m == 1) return {1.0, 0.0};
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
        const Complex v = k_factor(m, s_, *table_).method_a;
        cache_.emplace(m, v);
        return v;
    }

private:
    const CoeffTable* table_;
    Complex s_;
    std::unordered_map<std::uint64_t, Complex> cache_;
};

std::vector<MollifierTable::Entry> beta_support(const MollifierTable& m) {
    std::vector<MollifierTable::Entry> sup;
    for (const auto& e : m.entries())
        if (e.beta != Complex(0.0, 0.0)) sup.push_back(e);
    if (sup.size() > 200)
        fail("selberg sum: mollifier support exceeds the 200-entry cap (X too large)");
    return sup;
}

std::string fmt_params(std::initializer_list<std::pair<const char*, double>> kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        if (!out.empty()) out += ';';
        out += k;
        out += '=';
        out += fmt_double(v);
    }
    return out;
}

}  // namespace

SumReport selberg_sum(double vartheta, double X, const CoeffTable& table,
                      const MollifierTable& m) {
    if (vartheta < 0.0 || vartheta > 0.25)
        fail("selberg_sum: vartheta must lie in [0, 1/4]");
    if (std::abs(m.X() - X) > 1e-9)
        fail("selberg_sum: X does not match the mollifier table");
    const auto sup = beta_support(m);
    const Complex s(1.0 - vartheta, 0.0);
    KCache K(table, s);

    KahanSumComplex acc;
    for (const auto& e1 : sup)
        for (const auto& e2 : sup)
            for (const auto& e3 : sup)
                for (const auto& e4 : sup) {
                    const std::uint64_t a = e1.nu * e4.nu;
                    const std::uint64_t b = e2.nu * e3.nu;
                    const std::uint64_t q = std::gcd(a, b);
                    const Complex kk = K.get(a / q) * std::conj(K.get(b / q));
                    const double base =
                        double(q) / (double(e1.nu) * double(e3.nu));
                    acc += e1.beta * std::conj(e2.beta) * e3.beta * std::conj(e4.beta) /
                           (double(e2.nu) * double(e4.nu)) *
                           std::pow(base, 1.0 - vartheta) * kk;
                }
    SumReport rep;
    rep.name = "selberg_direct";
    rep.params = fmt_params({{"vartheta", vartheta}, {"X", X}});
    rep.value = acc.value();
    return rep;
}

SumReport selberg_sum_decomposed(double vartheta, double X, const CoeffTable& table,
                                 const MollifierTable& m) {
    if (vartheta < 0.0 || vartheta > 0.25)
        fail("selberg_sum_decomposed: vartheta must lie in [0, 1/4]");
    if (std::abs(m.X() - X) > 1e-9)
        fail("selberg_sum_decomposed: X does not match the mollifier table");
    const auto sup = beta_support(m);
    const Complex s(1.0 - vartheta, 0.0);
    KCache K(table, s);

    // Candidate d: products of support primes with exponents <= 2, d <= X^2.
    std::vector<std::uint64_t> primes;
    for (const auto& e : sup)
        if (e.nu > 1 && factor_by_trial(e.nu).size() == 1 &&
            factor_by_trial(e.nu)[0].second == 1)
            primes.push_back(e.nu);
    std::sort(primes.begin(), primes.end());
    const double X2 = X * X;
    std::vector<std::uint64_t> ds{1};
    struct DFrame {
        std::size_t next;
        std::uint64_t d;
    };
    std::vector<DFrame> stack{{0, 1}};
    while (!stack.empty()) {
        DFrame f = stack.back();
        stack.pop_back();
        for (std::size_t i = f.next; i < primes.size(); ++i) {
            for (int e = 1; e <= 2; ++e) {
                std::uint64_t d = f.d;
                bool fits = true;
                for (int j = 0; j < e; ++j) {
                    d *= primes[i];
                    if (double(d) > X2) {
                        fits = false;
                        break;
                    }
                }
                if (!fits) break;
                ds.push_back(d);
                stack.push_back({i + 1, d});
            }
            if (double(f.d) * double(primes[i]) > X2) break;
        }
    }
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());

    KahanSumComplex acc;
    for (std::uint64_t d : ds) {
        // squarefree divisors of d and their Moebius signs
        const auto df = factor_by_trial(d);
        std::vector<std::pair<std::uint64_t, int>> mdivs{{1, 1}};
        for (auto [p, a] : df) {
            (void)a;
            const std::size_t base = mdivs.size();
            for (std::size_t i = 0; i < base; ++i)
                mdivs.push_back({mdivs[i].first * p, -mdivs[i].second});
        }
        for (auto [mm, mu] : mdivs) {
            KahanSumComplex g1, g2;
            bool any = false;
            for (const auto& ea : sup)
                for (const auto& eb : sup) {
                    const std::uint64_t prod = ea.nu * eb.nu;
                    if (prod % d != 0) continue;
                    any = true;
                    const Complex kk = K.get(prod * mm / d);
                    g1 += ea.beta * eb.beta /
                          (std::pow(double(ea.nu), 1.0 - vartheta) * double(eb.nu)) * kk;
                    g2 += std::conj(ea.beta) * eb.beta /
                          (double(ea.nu) * std::pow(double(eb.nu), 1.0 - vartheta)) *
                          std::conj(kk);
                }
            if (!any) continue;
            acc += double(mu) * std::pow(double(d) / double(mm), 1.0 - vartheta) *
                   g1.value() * g2.value();
        }
    }
    SumReport rep;
    rep.name = "selberg_decomposed";
    rep.params = fmt_params({{"vartheta", vartheta}, {"X", X}});
    rep.value = acc.value();
    return rep;
}

double b_function(std::uint64_t n, const MollifierTable& m) {
    if (n == 0) fail("b_function: n must be positive");
    const CoeffTable& table = m.source();
    double b = 1.0;
    for (auto [p, a] : factor_by_trial(n)) {
        if (p <= 256)
            fail("b_function: n=" + std::to_string(n) + " outside the alpha-support closure");
        if (p > table.n_max()) fail("b_function: prime outside coefficient coverage");
        const double rp = std::abs(table.r(p));
        if (a == 1)
            b *= rp;
        else if (a == 2)
            b *= rp * rp / 4.0;
        else
            return 0.0;
    }
    return b;
}

RankinSeries rankin_series(Complex s, const CoeffTable& table, std::uint32_t N) {
    if (s.real() <= 1.0) fail("rankin_series: requires Re s > 1");
    if (N > table.n_max()) fail("rankin_series: cutoff exceeds coefficient coverage");
    KahanSumComplex cacc;
    for (std::uint32_t n = 1; n <= N; ++n)
        cacc += Complex(std::norm(table.r(n)), 0.0) * std::exp(-s * std::log(double(n)));
    const double sigma = s.real();
    double tail = std::numeric_limits<double>::infinity();
    struct Fam {
        double e, C;
    };
    for (Fam f : {Fam{2.0 / 3.0, 3.53 * 3.53}, Fam{0.4, 28.0 * 28.0}, Fam{1.0, 4.0}}) {
        if (sigma > 1.0 + f.e + 1e-9)
            tail = std::min(tail,
                            f.C * std::pow(double(N), 1.0 + f.e - sigma) / (sigma - 1.0 - f.e));
    }
    return {cacc.value(), tail};
}

RankinMean rankin_mean(double x, const CoeffTable& table) {
    if (x < 1.0) fail("rankin_mean: x must be >= 1");
    if (x > double(table.n_max())) fail("rankin_mean: x exceeds coefficient coverage");
    RankinMean out;
    out.x = x;
    double xi = x;
    for (int i = 0; i < 4 && xi >= 2.0; ++i, xi /= 2.0) {
        KahanSum acc;
        const auto cap = static_cast<std::uint32_t>(xi);
        for (std::uint32_t n = 1; n <= cap; ++n) acc += std::norm(table.r(n));
        out.doubling_trace.emplace_back(xi, acc.value() / xi);
    }
    out.mean = out.doubling_trace.front().second;
    return out;
}

ShiftedSum shifted_convolution(std::uint32_t N, std::uint32_t m1, std::uint32_t m2,
                               std::uint64_t l, const CoeffTable& table) {
    if (N < 2) fail("shifted_convolution: N must be >= 2");
    if (std::gcd(m1, m2) != 1) fail("shifted_convolution: gcd(m1, m2) must be 1");
    const std::uint64_t top = (std::uint64_t(m1) * (N - 1) + l) / m2;
    if (N - 1 > table.n_max() || top > table.n_max())
        fail("shifted_convolution: coverage insufficient (need n_max >= " +
             std::to_string(std::max<std::uint64_t>(N - 1, top)) + ")");

    ShiftedSum out{};
    {
        KahanSumComplex acc;
        KahanSum abs_acc;
        long terms = 0;
        for (std::uint32_t n = 1; n < N; ++n) {
            const std::uint64_t v = std::uint64_t(m1) * n + l;
            if (v % m2 != 0) continue;
            const Complex term = table.r(n) * std::conj(table.r(v / m2));
            acc += term;
            abs_acc += std::abs(term);
            ++terms;
        }
        out.forward = acc.value();
        out.abs_sum = abs_acc.value();
        out.terms = terms;
    }
    {
        KahanSumComplex acc;
        std::uint64_t n0 = 0;
        if (m2 > 1) {
            const std::uint64_t lm = l % m2;
            n0 = (inv_mod(m1, m2) * ((m2 - lm) % m2)) % m2;
        }
        if (n0 == 0) n0 = m2;
        for (std::uint64_t n = n0; n < N; n += m2) {
            const std::uint64_t v = std::uint64_t(m1) * n + l;
            acc += table.r(n) * std::conj(table.r(v / m2));
        }
        out.bucketed = acc.value();
    }
    out.cancellation_ratio =
        out.abs_sum > 0.0 ? std::abs(out.forward) / out.abs_sum : 0.0;
    return out;
}

ShiftedDirichlet shifted_dirichlet(Complex s, std::uint64_t l, std::uint32_t m1,
                                   std::uint32_t m2, const CoeffTable& table,
                                   std::uint32_t N) {
    if (std::gcd(m1, m2) != 1) fail("shifted_dirichlet: gcd(m1, m2) must be 1");
    if (s.real() < 10.0 / 11.0 + 1e-9)
        fail("shifted_dirichlet: requires Re s > 10/11");
    const std::uint64_t top = (std::uint64_t(m1) * N + l) / m2;
    if (N > table.n_max() || top > table.n_max())
        fail("shifted_dirichlet: coverage insufficient");
    KahanSumComplex acc;
    for (std::uint32_t n = 1; n <= N; ++n) {
        const std::uint64_t v = std::uint64_t(m1) * n + l;
        if (v % m2 != 0) continue;
        acc += table.r(n) * std::conj(table.r(v / m2)) *
               std::exp(-s * std::log(double(m1) * n + 0.5 * double(l)));
    }
    const double sigma = s.real();
    double tail = std::numeric_limits<double>::infinity();
    if (sigma > 5.0 / 3.0 + 1e-9) {
        const double C2 = 3.53 * 3.53;
        tail = C2 * std::pow(double(m1), 1.0 / 3.0 - sigma) *
               std::pow(double(N), 5.0 / 3.0 - sigma) / (sigma - 5.0 / 3.0);
    }
    return {acc.value(), tail};
}

namespace {

// m-smooth integers (rad | rad(m)) up to `cap`, ascending.
std::vector<std::uint64_t> smooth_upto(const std::vector<std::uint64_t>& primes,
                                       std::uint64_t cap) {
    std::vector<std::uint64_t> out{1};
    for (std::uint64_t p : primes) {
        const std::size_t base = out.size();
        for (std::size_t i = 0; i < base; ++i) {
            std::uint64_t v = out[i];
            while (v <= cap / p) {
                v *= p;
                out.push_back(v);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

SumReport shifted_split_check(Complex s, std::uint32_t m1, std::uint32_t m2,
                              const CoeffTable& table, std::uint32_t N) {
    if (std::gcd(m1, m2) != 1) fail("shifted_split_check: gcd(m1, m2) must be 1");
    const std::uint64_t need = std::uint64_t(N) * std::max(m1, m2);
    if (need > table.n_max())
        fail("shifted_split_check: coverage insufficient (need n_max >= " +
             std::to_string(need) + ")");

    const Complex mfac = std::exp(-s * std::log(double(m1) * double(m2)));

    // Left: (m1 m2)^{-s} sum_{n<=N} r(n m2) conj(r(n m1)) n^{-s}.
    KahanSumComplex left;
    for (std::uint32_t n = 1; n <= N; ++n)
        left += table.r(std::uint64_t(n) * m2) * std::conj(table.r(std::uint64_t(n) * m1)) *
                std::exp(-s * std::log(double(n)));

    // Right: the same truncation of K(m1,s) conj(K(m2,s)) D(s) as a
    // Dirichlet polynomial, from the coefficient expansion of each factor.
    auto k_coeffs = [&](std::uint32_t m) {
        std::vector<std::uint64_t> primes;
        for (auto [p, a] : factor_by_trial(m)) {
            (void)a;
            if (p <= 256) fail("shifted_split_check: m has a prime factor <= 256");
            primes.push_back(p);
        }
        const auto smooth = smooth_upto(primes, N);
        std::map<std::uint64_t, Complex> num, deninv;
        std::map<std::uint64_t, double> den;
        for (std::uint64_t k : smooth) {
            num[k] = std::conj(table.r(std::uint64_t(m) * k)) * table.r(k);
            den[k] = std::norm(table.r(k));
        }
        for (std::uint64_t k : smooth) {
            if (k == 1) {
                deninv[1] = 1.0;
                continue;
            }
            Complex acc{0.0, 0.0};
            for (std::uint64_t d : smooth) {
                if (d == 1 || d > k || k % d != 0) continue;
                auto it = deninv.find(k / d);
                if (it != deninv.end()) acc += den[d] * it->second;
            }
            deninv[k] = -acc;
        }
        std::map<std::uint64_t, Complex> kc;
        for (std::uint64_t u : smooth)
            for (std::uint64_t v : smooth) {
                if (u > N / v) break;
                kc[u * v] += num[u] * deninv[v];
            }
        return kc;
    };
    const auto kc1 = k_coeffs(m1);
    const auto kc2 = k_coeffs(m2);

    // prefix sums of |r(w)|^2 w^{-s}
    std::vector<Complex> prefix(N + 1, Complex(0.0, 0.0));
    {
        KahanSumComplex acc;
        for (std::uint32_t w = 1; w <= N; ++w) {
            acc += Complex(std::norm(table.r(w)), 0.0) * std::exp(-s * std::log(double(w)));
            prefix[w] = acc.value();
        }
    }
    KahanSumComplex right;
    for (const auto& [u, cu] : kc1)
        for (const auto& [v, cv] : kc2) {
            if (u > N / v) break;
            const std::uint64_t uv = u * v;
            right += cu * std::conj(cv) * std::exp(-s * std::log(double(uv))) *
                     prefix[N / uv];
        }

    SumReport rep;
    rep.name = "shifted_split_l0";
    rep.params = fmt_params({{"m1", double(m1)},
                             {"m2", double(m2)},
                             {"sigma", s.real()},
                             {"t", s.imag()},
                             {"N", double(N)}});
    rep.value = mfac * left.value();
    rep.set_oracle(mfac * right.value());
    return rep;
}

SumReport estimate13_sum(double X1, double gamma, double vartheta, std::uint64_t N,
                         const CoeffTable& table) {
    if (X1 < 1.0) fail("estimate13_sum: X1 must be >= 1");
    if (gamma < 0.0 || gamma > 0.25 || vartheta < 0.0 || vartheta > 0.25)
        fail("estimate13_sum: gamma and vartheta must lie in [0, 1/4]");
    if (X1 > double(table.n_max()))
        fail("estimate13_sum: X1 exceeds coefficient coverage");

    // alpha support up to X1 (same depth-first enumeration as the mollifier)
    ArithCache cache(static_cast<std::uint32_t>(std::max(X1, 4.0)));
    std::vector<std::uint32_t> primes;
    for (std::uint32_t p : cache.primes())
        if (p > 256) primes.push_back(p);
    struct Node {
        std::size_t next;
        std::uint64_t nu;
        Complex alpha;
    };
    std::vector<Node> stack{{0, 1, {1.0, 0.0}}};
    KahanSumComplex acc;
    const Complex s(1.0 - vartheta, 0.0);
    KCache K(table, s);
    // lambda = 1 term
    acc += std::log(X1);
    while (!stack.empty()) {
        Node f = stack.back();
        stack.pop_back();
        for (std::size_t i = f.next; i < primes.size(); ++i) {
            const std::uint64_t nu = f.nu * primes[i];
            if (double(nu) > X1) break;
            const Complex alpha = f.alpha * (-0.5 * table.r(primes[i]));
            if (std::gcd(nu, N) == 1)
                acc += alpha * K.get(nu) * std::pow(double(nu), gamma - 1.0) *
                       std::log(X1 / double(nu));
            stack.push_back({i + 1, nu, alpha});
        }
    }

    double chi_n = 1.0;
    for (auto [p, a] : factor_by_trial(N)) {
        (void)a;
        chi_n *= (1.0 + 1.0 / double(p)) * (1.0 + 1.0 / double(p));
    }
    const double bound_shape = std::pow(X1, gamma) * std::sqrt(std::log(X1 + 2.0)) * chi_n;

    SumReport rep;
    rep.name = "estimate13";
    rep.params = fmt_params({{"X1", X1},
                             {"gamma", gamma},
                             {"vartheta", vartheta},
                             {"N", double(N)},
                             {"ratio_vs_bound", std::abs(acc.value()) / bound_shape}});
    rep.value = acc.value();
    return rep;
}

bool moebius_identity_check(std::uint64_t q) {
    if (q == 0) fail("moebius_identity_check: q must be positive");
    const auto f = [](std::uint64_t n) -> std::int64_t {
        return std::int64_t(n) * std::int64_t(n) + 3 * std::int64_t(n) + 7;
    };
    const auto mu_of = [](std::uint64_t n) -> std::int64_t {
        std::int64_t mu = 1;
        for (auto [p, a] : factor_by_trial(n)) {
            (void)p;
            if (a > 1) return 0;
            mu = -mu;
        }
        return mu;
    };
    std::vector<std::uint64_t> divs;
    for (std::uint64_t d = 1; d * d <= q; ++d) {
        if (q % d == 0) {
            divs.push_back(d);
            if (d * d != q) divs.push_back(q / d);
        }
    }
    std::int64_t total = 0;
    for (std::uint64_t d : divs)
        for (std::uint64_t m = 1; m <= d; ++m) {
            if (d % m != 0) continue;
            total += mu_of(m) * f(d / m);
        }
    return total == f(q);
}

void write_sum_reports_csv(const std::string& path, const std::vector<SumReport>& reports) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("write_sum_reports_csv: cannot open '" + path + "'");
    out << "name,params,value_re,value_im,oracle_re,oracle_im,discrepancy,tail_bound\n";
    for (const SumReport& r : reports) {
        out << r.name << ',' << r.params << ',' << fmt_double(r.value.real()) << ','
            << fmt_double(r.value.imag()) << ',';
        if (r.has_oracle)
            out << fmt_double(r.oracle.real()) << ',' << fmt_double(r.oracle.imag());
        else
            out << ',';
        out << ',' << fmt_double(r.discrepancy) << ',' << fmt_double(r.tail_bound) << '\n';
    }
}

}  // namespace critline::sums
