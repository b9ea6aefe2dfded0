#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "critline/int128.hpp"

namespace critline::forms {

/// Dirichlet character attached to a form. Only the characters the built-in
/// forms need exist: the trivial/principal character mod D and the real
/// quadratic character given by the Jacobi symbol mod an odd prime level.
struct Character {
    enum class Kind { Trivial, Quadratic };
    Kind kind = Kind::Trivial;
    std::uint32_t modulus = 1;

    // -1, 0 or +1; zero exactly on residues sharing a factor with the modulus.
    int value_int(std::int64_t n) const;
    std::complex<double> value(std::int64_t n) const { return {double(value_int(n)), 0.0}; }
};

struct EtaFactor {
    std::uint32_t scale;  // m in (1 - q^{m j})
    int exponent;
};

/// Arithmetic identity of a cusp form: weight, level, character, coefficient
/// source, and (once computed) the root number of the functional equation.
struct FormSpec {
    std::string id;
    int weight = 0;
    std::uint32_t level = 1;
    Character chi;
    std::vector<EtaFactor> eta;  // empty when coefficients come from a prime table
    std::complex<double> root_number{0.0, 0.0};
    bool root_number_known = false;
};

FormSpec builtin_delta();  // weight 12, level 1, eta(z)^24
FormSpec builtin_f23();    // weight 1, level 23, eta(z) eta(23z)
FormSpec builtin(const std::string& id);
bool is_builtin(const std::string& id);

/// q-expansion coefficients of q^w * prod_i prod_{j>=1} (1-q^{m_i j})^{e_i},
/// indexed so the first nonzero coefficient is a(1) = 1. Exact integers via
/// the pentagonal-number sparse representation of each Euler-product factor.
std::vector<int128> expand_eta_product(const std::vector<EtaFactor>& source,
                                       std::uint32_t n_max);

/// a(n) and r(n) = a(n) n^{(1-k)/2} up to n_max. Immutable after construction.
class CoeffTable {
public:
    CoeffTable(FormSpec form, std::vector<int128> a_exact);
    CoeffTable(FormSpec form, std::vector<std::complex<double>> r_values);

    const FormSpec& form() const { return form_; }
    std::uint32_t n_max() const { return n_max_; }

    bool has_exact() const { return !a_exact_.empty(); }
    int128 a_exact(std::uint64_t n) const;
    std::complex<double> a(std::uint64_t n) const;
    std::complex<double> r(std::uint64_t n) const;
    // Fast path used by series evaluators; real part of r(n).
    double r_real(std::uint64_t n) const { return r_re_[n]; }

    void set_root_number(std::complex<double> theta);

private:
    FormSpec form_;
    std::uint32_t n_max_;
    std::vector<int128> a_exact_;          // 1-based, empty for float tables
    std::vector<std::complex<double>> r_;  // 1-based
    std::vector<double> r_re_;
};

/// Builds the table from the form's eta product and verifies every table
/// invariant (normalization, Hecke relations, Deligne bound) before
/// returning. Throws naming the first violating index otherwise.
CoeffTable build_coeff_table(const FormSpec& form, std::uint32_t n_max);

/// Fills r(n) for all n <= n_max from r(p) via the Hecke recurrence
/// r(p^{a+1}) = r(p) r(p^a) - chi(p) r(p^{a-1}) and multiplicativity.
/// `prime_r` must carry every prime <= n_max.
CoeffTable reconstruct_from_primes(
    const FormSpec& form,
    const std::vector<std::pair<std::uint32_t, std::complex<double>>>& prime_r,
    std::uint32_t n_max);

/// Integer-exact counterpart working on a(p), used as the independent
/// cross-check against expand_eta_product.
std::vector<int128> reconstruct_exact_from_prime_a(
    const FormSpec& form,
    const std::vector<std::pair<std::uint32_t, int128>>& prime_a,
    std::uint32_t n_max);

void verify_table_invariants(const CoeffTable& table);

// Coefficient cache, CSV `form_id,k,D,n,a_re,a_im`; integer-exact round trip.
void write_coeff_cache(const std::string& path, const CoeffTable& table);
CoeffTable read_coeff_cache(const std::string& path);

}  // namespace critline::forms
