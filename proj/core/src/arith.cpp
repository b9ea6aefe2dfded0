#include "critline/arith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "critline/int128.hpp"

namespace critline {

std::string to_string(int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                              : static_cast<unsigned __int128>(v);
    std::string digits;
    while (u > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

int128 parse_int128(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_int128: empty string");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = (s[0] == '-');
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("parse_int128: no digits");
    int128 v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("parse_int128: bad digit in '" + s + "'");
        v = checked_add(checked_mul(v, 10), s[i] - '0');
    }
    return neg ? -v : v;
}

ArithCache::ArithCache(std::uint32_t limit) : limit_(limit) {
    if (limit < 1) throw std::invalid_argument("ArithCache: limit must be >= 1");
    spf_.assign(limit + 1, 0);
    mu_.assign(limit + 1, 0);
    mu_[1] = 1;
    spf_[1] = 1;
    // Linear sieve: each n is struck exactly once by its smallest prime.
    for (std::uint32_t n = 2; n <= limit; ++n) {
        if (spf_[n] == 0) {
            spf_[n] = n;
            mu_[n] = -1;
            primes_.push_back(n);
        }
        for (std::uint32_t p : primes_) {
            if (p > spf_[n] || static_cast<std::uint64_t>(p) * n > limit) break;
            spf_[p * n] = p;
            mu_[p * n] = (p == spf_[n]) ? 0 : static_cast<std::int8_t>(-mu_[n]);
        }
    }
}

int ArithCache::mu(std::uint64_t n) const {
    if (n == 0 || n > limit_) throw std::out_of_range("ArithCache::mu: n outside table");
    return mu_[n];
}

std::uint64_t ArithCache::tau_t(int t, std::uint64_t n) const {
    if (t < 1 || t > 6) throw std::invalid_argument("ArithCache::tau_t: t must be in [1,6]");
    if (n == 0 || n > limit_) throw std::out_of_range("ArithCache::tau_t: n outside table");
    // tau_t(p^a) = C(a+t-1, t-1), multiplicative.
    std::uint64_t result = 1;
    for (auto [p, a] : factor(n)) {
        (void)p;
        std::uint64_t binom = 1;
        for (int j = 1; j <= t - 1; ++j) binom = binom * (a + j) / j;
        result *= binom;
    }
    return result;
}

std::uint32_t ArithCache::smallest_prime_factor(std::uint32_t n) const {
    if (n == 0 || n > limit_) throw std::out_of_range("ArithCache: n outside table");
    return spf_[n];
}

bool ArithCache::is_prime(std::uint32_t n) const {
    return n >= 2 && smallest_prime_factor(n) == n;
}

std::vector<std::pair<std::uint64_t, int>> ArithCache::factor(std::uint64_t n) const {
    if (n == 0 || n > limit_) throw std::out_of_range("ArithCache::factor: n outside table");
    std::vector<std::pair<std::uint64_t, int>> f;
    auto m = static_cast<std::uint32_t>(n);
    while (m > 1) {
        const std::uint32_t p = spf_[m];
        int a = 0;
        while (m % p == 0) {
            m /= p;
            ++a;
        }
        f.emplace_back(p, a);
    }
    return f;
}

std::vector<std::uint64_t> ArithCache::divisors(std::uint64_t n) const {
    std::vector<std::uint64_t> divs{1};
    for (auto [p, a] : factor(n)) {
        const std::size_t base = divs.size();
        std::uint64_t pe = 1;
        for (int j = 1; j <= a; ++j) {
            pe *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pe);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

std::uint64_t ArithCache::radical(std::uint64_t n) const {
    std::uint64_t r = 1;
    for (auto [p, a] : factor(n)) {
        (void)a;
        r *= p;
    }
    return r;
}

int jacobi(std::int64_t a, std::uint64_t n) {
    if (n % 2 == 0) throw std::invalid_argument("jacobi: modulus must be odd");
    a %= static_cast<std::int64_t>(n);
    if (a < 0) a += static_cast<std::int64_t>(n);
    std::uint64_t u = static_cast<std::uint64_t>(a), v = n;
    int result = 1;
    while (u != 0) {
        while (u % 2 == 0) {
            u /= 2;
            const std::uint64_t m = v % 8;
            if (m == 3 || m == 5) result = -result;
        }
        std::swap(u, v);
        if (u % 4 == 3 && v % 4 == 3) result = -result;
        u %= v;
    }
    return v == 1 ? result : 0;
}

std::uint64_t inv_mod(std::int64_t a, std::uint64_t q) {
    if (q == 0) throw std::invalid_argument("inv_mod: zero modulus");
    if (q == 1) return 0;
    std::int64_t r0 = static_cast<std::int64_t>(q), r1 = a % static_cast<std::int64_t>(q);
    if (r1 < 0) r1 += static_cast<std::int64_t>(q);
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t k = r0 / r1;
        r0 -= k * r1;
        std::swap(r0, r1);
        t0 -= k * t1;
        std::swap(t0, t1);
    }
    if (r0 != 1) throw std::invalid_argument("inv_mod: arguments not coprime");
    if (t0 < 0) t0 += static_cast<std::int64_t>(q);
    return static_cast<std::uint64_t>(t0);
}

std::uint64_t tau_direct(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("tau_direct: n must be positive");
    std::uint64_t count = 0;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) count += (d * d == n) ? 1 : 2;
    }
    return count;
}

}  // namespace critline
