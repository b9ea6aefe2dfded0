#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace critline {

/// Sieved multiplicative-function tables shared by the mollifier and
/// Selberg-sum machinery: mu(n), tau(n), tau_t(n) for t <= 6, and the
/// smallest prime factor, all for n up to a fixed limit.
class ArithCache {
public:
    explicit ArithCache(std::uint32_t limit);

    std::uint32_t limit() const { return limit_; }

    int mu(std::uint64_t n) const;
    std::uint64_t tau(std::uint64_t n) const { return tau_t(2, n); }
    // Number of ordered factorizations of n into t parts, 1 <= t <= 6.
    std::uint64_t tau_t(int t, std::uint64_t n) const;
    std::uint32_t smallest_prime_factor(std::uint32_t n) const;
    bool is_prime(std::uint32_t n) const;

    const std::vector<std::uint32_t>& primes() const { return primes_; }

    // (p, multiplicity) pairs, ascending p.
    std::vector<std::pair<std::uint64_t, int>> factor(std::uint64_t n) const;
    std::vector<std::uint64_t> divisors(std::uint64_t n) const;
    std::uint64_t radical(std::uint64_t n) const;

private:
    std::uint32_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::int8_t> mu_;
    std::vector<std::uint32_t> primes_;
};

// Jacobi symbol (a|n) for odd positive n; 0 when gcd(a,n) > 1.
int jacobi(std::int64_t a, std::uint64_t n);

// Inverse of a modulo q (gcd(a,q)=1 required), normalized into [0,q).
std::uint64_t inv_mod(std::int64_t a, std::uint64_t q);

// Divisor count without a sieve, by trial division.
std::uint64_t tau_direct(std::uint64_t n);

}  // namespace critline
