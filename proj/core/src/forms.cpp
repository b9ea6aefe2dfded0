#include "critline/forms.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "critline/arith.hpp"

namespace critline::forms {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("forms: " + msg);
}

}  // namespace

int Character::value_int(std::int64_t n) const {
    switch (kind) {
        case Kind::Trivial:
            if (modulus == 1) return 1;
            return std::gcd(static_cast<std::uint64_t>(((n % modulus) + modulus) % modulus),
                            static_cast<std::uint64_t>(modulus)) == 1
                       ? 1
                       : 0;
        case Kind::Quadratic:
            return jacobi(n, modulus);
    }
    fail("unknown character kind");
}

FormSpec builtin_delta() {
    FormSpec f;
    f.id = "delta";
    f.weight = 12;
    f.level = 1;
    f.chi = Character{Character::Kind::Trivial, 1};
    f.eta = {{1, 24}};
    return f;
}

FormSpec builtin_f23() {
    FormSpec f;
    f.id = "f23";
    f.weight = 1;
    f.level = 23;
    f.chi = Character{Character::Kind::Quadratic, 23};
    f.eta = {{1, 1}, {23, 1}};
    return f;
}

bool is_builtin(const std::string& id) { return id == "delta" || id == "f23"; }

FormSpec builtin(const std::string& id) {
    if (id == "delta") return builtin_delta();
    if (id == "f23") return builtin_f23();
    fail("unknown built-in form '" + id + "' (have: delta, f23)");
}

std::vector<int128> expand_eta_product(const std::vector<EtaFactor>& source,
                                       std::uint32_t n_max) {
    if (n_max == 0) fail("expand_eta_product: n_max must be >= 1");
    if (source.empty()) fail("expand_eta_product: empty exponent list");
    std::int64_t total = 0;
    for (const auto& fct : source) {
        if (fct.scale == 0) fail("expand_eta_product: zero scale");
        if (fct.exponent <= 0)
            fail("expand_eta_product: exponents must be positive integers");
        total += static_cast<std::int64_t>(fct.scale) * fct.exponent;
    }
    if (total % 24 != 0)
        fail("expand_eta_product: sum of scale*exponent must be divisible by 24");
    const std::int64_t lead = total / 24;  // leading q-power
    if (lead < 1) fail("expand_eta_product: not a cusp form (leading power < 1)");
    if (static_cast<std::uint64_t>(lead) > n_max)
        fail("expand_eta_product: leading q-power exceeds n_max");

    const std::uint32_t deg = n_max - 1;  // coefficients of q^{lead}..q^{lead+deg}
    std::vector<int128> series(deg + 1, 0);
    series[0] = 1;

    for (const auto& fct : source) {
        // Euler's pentagonal expansion of prod_j (1 - q^{m j}):
        // offsets m*j(3j-1)/2 and m*j(3j+1)/2 with sign (-1)^j.
        std::vector<std::pair<std::uint32_t, int>> offsets;
        for (std::uint64_t j = 1;; ++j) {
            const std::uint64_t g1 = j * (3 * j - 1) / 2 * fct.scale;
            const std::uint64_t g2 = j * (3 * j + 1) / 2 * fct.scale;
            const int sign = (j % 2 == 1) ? -1 : 1;
            if (g1 > deg) break;
            offsets.emplace_back(static_cast<std::uint32_t>(g1), sign);
            if (g2 <= deg) offsets.emplace_back(static_cast<std::uint32_t>(g2), sign);
        }
        // Guard: with max |coef| below this, one sparse pass cannot overflow.
        const int128 guard = (int128(1) << 120) / int128(offsets.size() + 1);
        for (int pass = 0; pass < fct.exponent; ++pass) {
            int128 maxabs = 0;
            for (std::uint32_t d = deg; d >= 1; --d) {
                int128 v = series[d];
                for (const auto& [off, sign] : offsets) {
                    if (off > d) break;
                    v += sign > 0 ? series[d - off] : -series[d - off];
                }
                series[d] = v;
                if (abs128(v) > maxabs) maxabs = abs128(v);
            }
            if (maxabs > guard)
                fail("expand_eta_product: coefficient magnitude exceeds exact range");
        }
    }
    return series;  // series[n-1] = a(n)
}

namespace {

std::vector<std::complex<double>> r_from_exact(const FormSpec& form,
                                               const std::vector<int128>& a) {
    std::vector<std::complex<double>> r(a.size() + 1);
    r[0] = 0.0;
    const double expo = 0.5 * (1.0 - form.weight);
    for (std::size_t n = 1; n <= a.size(); ++n)
        r[n] = {static_cast<double>(a[n - 1]) * std::pow(double(n), expo), 0.0};
    return r;
}

}  // namespace

CoeffTable::CoeffTable(FormSpec form, std::vector<int128> a_exact)
    : form_(std::move(form)),
      n_max_(static_cast<std::uint32_t>(a_exact.size())),
      a_exact_(std::move(a_exact)) {
    if (n_max_ == 0) fail("CoeffTable: empty coefficient list");
    r_ = r_from_exact(form_, a_exact_);
    r_re_.resize(r_.size());
    for (std::size_t i = 0; i < r_.size(); ++i) r_re_[i] = r_[i].real();
}

CoeffTable::CoeffTable(FormSpec form, std::vector<std::complex<double>> r_values)
    : form_(std::move(form)),
      n_max_(static_cast<std::uint32_t>(r_values.size()) - 1) {
    if (r_values.size() < 2) fail("CoeffTable: empty coefficient list");
    r_ = std::move(r_values);
    r_re_.resize(r_.size());
    for (std::size_t i = 0; i < r_.size(); ++i) r_re_[i] = r_[i].real();
}

int128 CoeffTable::a_exact(std::uint64_t n) const {
    if (!has_exact()) fail("CoeffTable: no exact integer lane for this table");
    if (n == 0 || n > n_max_) fail("CoeffTable: index outside table");
    return a_exact_[n - 1];
}

std::complex<double> CoeffTable::a(std::uint64_t n) const {
    if (n == 0 || n > n_max_) fail("CoeffTable: index outside table");
    if (has_exact()) return {static_cast<double>(a_exact_[n - 1]), 0.0};
    return r_[n] * std::pow(double(n), 0.5 * (form_.weight - 1.0));
}

std::complex<double> CoeffTable::r(std::uint64_t n) const {
    if (n == 0 || n > n_max_) fail("CoeffTable: index outside table");
    return r_[n];
}

void CoeffTable::set_root_number(std::complex<double> theta) {
    form_.root_number = theta;
    form_.root_number_known = true;
}

void verify_table_invariants(const CoeffTable& table) {
    const FormSpec& form = table.form();
    const std::uint32_t n_max = table.n_max();
    ArithCache cache(n_max);

    if (table.has_exact()) {
        if (table.a_exact(1) != 1) fail("normalization a(1)=1 violated");
        for (std::uint32_t n = 2; n <= n_max; ++n) {
            const std::uint32_t p = cache.smallest_prime_factor(n);
            std::uint32_t pa = p, m = n / p;
            while (m % p == 0) {
                pa *= p;
                m /= p;
            }
            if (m > 1) {
                // coprime split n = p^a * m
                if (table.a_exact(n) != checked_mul(table.a_exact(pa), table.a_exact(m)))
                    fail("Hecke multiplicativity violated at n=" + std::to_string(n));
            } else if (pa != p) {
                // prime power, a >= 2: a(p^a) = a(p)a(p^{a-1}) - chi(p) p^{k-1} a(p^{a-2})
                int128 pk = 1;
                for (int j = 0; j < form.weight - 1; ++j) pk = checked_mul(pk, p);
                const int128 expect =
                    checked_add(checked_mul(table.a_exact(p), table.a_exact(pa / p)),
                                -checked_mul(pk, checked_mul(int128(form.chi.value_int(p)),
                                                             table.a_exact(pa / p / p))));
                if (table.a_exact(n) != expect)
                    fail("Hecke recurrence violated at n=" + std::to_string(n));
            }
        }
    } else {
        if (std::abs(table.r(1) - std::complex<double>(1.0, 0.0)) > 1e-12)
            fail("normalization r(1)=1 violated");
    }

    for (std::uint32_t n = 1; n <= n_max; ++n) {
        const double bound = static_cast<double>(cache.tau(n)) * (1.0 + 1e-12);
        if (std::abs(table.r(n)) > bound)
            fail("Deligne bound |r(n)| <= tau(n) violated at n=" + std::to_string(n));
    }
}

CoeffTable build_coeff_table(const FormSpec& form, std::uint32_t n_max) {
    if (n_max == 0) fail("build_coeff_table: n_max must be >= 1");
    if (form.eta.empty())
        fail("build_coeff_table: form has no eta-product source; "
             "use reconstruct_from_primes for prime-table forms");
    CoeffTable table(form, expand_eta_product(form.eta, n_max));
    verify_table_invariants(table);
    return table;
}

CoeffTable reconstruct_from_primes(
    const FormSpec& form,
    const std::vector<std::pair<std::uint32_t, std::complex<double>>>& prime_r,
    std::uint32_t n_max) {
    if (n_max == 0) fail("reconstruct_from_primes: n_max must be >= 1");
    ArithCache cache(n_max);
    std::vector<std::complex<double>> r(n_max + 1, 0.0);
    r[0] = 0.0;
    if (n_max >= 1) r[1] = 1.0;
    std::vector<bool> have(n_max + 1, false);
    for (auto [p, v] : prime_r) {
        if (p <= n_max) {
            if (!cache.is_prime(p)) fail("reconstruct_from_primes: " + std::to_string(p) + " is not prime");
            r[p] = v;
            have[p] = true;
        }
    }
    for (std::uint32_t p : cache.primes())
        if (!have[p]) fail("reconstruct_from_primes: missing prime value r(" + std::to_string(p) + ")");

    for (std::uint32_t n = 2; n <= n_max; ++n) {
        const std::uint32_t p = cache.smallest_prime_factor(n);
        if (n == p) continue;
        std::uint32_t pa = p, m = n / p;
        while (m % p == 0) {
            pa *= p;
            m /= p;
        }
        if (m > 1)
            r[n] = r[pa] * r[m];
        else
            r[n] = r[p] * r[n / p] -
                   std::complex<double>(form.chi.value_int(p), 0.0) * r[n / p / p];
    }
    CoeffTable table(form, std::move(r));
    verify_table_invariants(table);
    return table;
}

std::vector<int128> reconstruct_exact_from_prime_a(
    const FormSpec& form,
    const std::vector<std::pair<std::uint32_t, int128>>& prime_a,
    std::uint32_t n_max) {
    if (n_max == 0) fail("reconstruct_exact_from_prime_a: n_max must be >= 1");
    ArithCache cache(n_max);
    std::vector<int128> a(n_max + 1, 0);
    a[1] = 1;
    std::vector<bool> have(n_max + 1, false);
    for (auto [p, v] : prime_a) {
        if (p <= n_max) {
            a[p] = v;
            have[p] = true;
        }
    }
    for (std::uint32_t p : cache.primes())
        if (!have[p])
            fail("reconstruct_exact_from_prime_a: missing prime value a(" + std::to_string(p) + ")");

    for (std::uint32_t n = 2; n <= n_max; ++n) {
        const std::uint32_t p = cache.smallest_prime_factor(n);
        if (n == p) continue;
        std::uint32_t pa = p, m = n / p;
        while (m % p == 0) {
            pa *= p;
            m /= p;
        }
        if (m > 1) {
            a[n] = checked_mul(a[pa], a[m]);
        } else {
            int128 pk = 1;
            for (int j = 0; j < form.weight - 1; ++j) pk = checked_mul(pk, p);
            a[n] = checked_add(checked_mul(a[p], a[n / p]),
                               -checked_mul(pk, checked_mul(int128(form.chi.value_int(p)),
                                                            a[n / p / p])));
        }
    }
    return std::vector<int128>(a.begin() + 1, a.end());
}

void write_coeff_cache(const std::string& path, const CoeffTable& table) {
    if (!table.has_exact())
        fail("write_coeff_cache: only integer-exact tables are cacheable");
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("write_coeff_cache: cannot open '" + path + "'");
    out << "form_id,k,D,n,a_re,a_im\n";
    const FormSpec& f = table.form();
    for (std::uint32_t n = 1; n <= table.n_max(); ++n) {
        out << f.id << ',' << f.weight << ',' << f.level << ',' << n << ','
            << to_string(table.a_exact(n)) << ",0\n";
    }
    if (!out) fail("write_coeff_cache: write failure on '" + path + "'");
}

CoeffTable read_coeff_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("read_coeff_cache: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "form_id,k,D,n,a_re,a_im")
        fail("read_coeff_cache: bad header in '" + path + "'");
    std::vector<int128> a;
    std::string form_id;
    int weight = 0;
    std::uint32_t level = 0;
    std::uint64_t expect_n = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string fid, ks, ds, ns, re, im;
        if (!std::getline(ss, fid, ',') || !std::getline(ss, ks, ',') ||
            !std::getline(ss, ds, ',') || !std::getline(ss, ns, ',') ||
            !std::getline(ss, re, ',') || !std::getline(ss, im))
            fail("read_coeff_cache: malformed row '" + line + "'");
        if (form_id.empty()) {
            form_id = fid;
            weight = std::stoi(ks);
            level = static_cast<std::uint32_t>(std::stoul(ds));
        } else if (fid != form_id) {
            fail("read_coeff_cache: mixed form ids in one cache file");
        }
        if (std::stoull(ns) != expect_n)
            fail("read_coeff_cache: rows out of order at n=" + ns);
        if (im != "0") fail("read_coeff_cache: nonzero imaginary part in exact cache");
        a.push_back(parse_int128(re));
        ++expect_n;
    }
    if (a.empty()) fail("read_coeff_cache: no rows in '" + path + "'");
    FormSpec form = is_builtin(form_id) ? builtin(form_id) : FormSpec{};
    if (!is_builtin(form_id)) {
        form.id = form_id;
        form.weight = weight;
        form.level = level;
    }
    if (form.weight != weight || form.level != level)
        fail("read_coeff_cache: header metadata disagrees with built-in form");
    return CoeffTable(form, std::move(a));
}

}  // namespace critline::forms
