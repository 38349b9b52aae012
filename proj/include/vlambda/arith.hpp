#pragma once

/// @file arith.hpp
/// @brief Exact 64-bit arithmetic primitives: prime tables, factorization,
/// Carmichael's lambda, Euler's phi and a few multiplicative helpers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vlambda {

using u64 = std::uint64_t;
__extension__ typedef unsigned __int128 u128;

struct PrimePower {
    u64 prime = 0;
    unsigned exponent = 0;

    friend bool operator==(PrimePower const&, PrimePower const&) = default;
};

/// Sorted prime-power decomposition. The empty list is the number 1.
///
/// The value itself is not stored: a witness modulus built from small
/// prime powers can exceed 64 bits, so `value()` is checked.
class Factorization {
public:
    Factorization() = default;
    /// Throws domain_error unless primes are strictly ascending and every
    /// exponent is at least 1. Primality is the caller's responsibility.
    explicit Factorization(std::vector<PrimePower> factors);

    std::span<const PrimePower> factors() const noexcept { return factors_; }
    std::size_t size() const noexcept { return factors_.size(); }
    bool is_one() const noexcept { return factors_.empty(); }

    std::optional<u64> try_value() const noexcept;
    /// Throws overflow_error when the product does not fit in 64 bits.
    u64 value() const;

    /// "2^3*3*11"; "1" for the empty product.
    std::string to_string() const;

    friend bool operator==(Factorization const&, Factorization const&) = default;

private:
    std::vector<PrimePower> factors_;
};

/// Smallest-prime-factor table, primality bitmap and ascending prime list
/// for every integer in [2, limit]. Immutable after construction.
class PrimeTables {
public:
    static constexpr u64 default_ceiling = 200'000'000;

    /// Throws config_error when limit < 2 or limit > ceiling.
    explicit PrimeTables(u64 limit, u64 ceiling = default_ceiling);

    u64 limit() const noexcept { return limit_; }
    std::span<const std::uint32_t> primes() const noexcept { return primes_; }

    /// Requires 2 <= n <= limit.
    std::uint32_t smallest_prime_factor(u64 n) const noexcept { return spf_[n]; }
    /// Bitmap lookup; requires n <= limit.
    bool is_prime(u64 n) const noexcept {
        return (bits_[n >> 6] >> (n & 63)) & 1u;
    }
    /// pi(x) for x <= limit.
    std::size_t prime_count(u64 x) const;

private:
    u64 limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<u64> bits_;
    std::vector<std::uint32_t> primes_;
};

PrimeTables build_tables(u64 limit, u64 ceiling = PrimeTables::default_ceiling);

/// Bitmap lookup, then trial division by stored primes. Throws
/// range_error when no factor is found and n exceeds limit^2.
bool is_prime(u64 n, PrimeTables const& tables);

/// Throws range_error for n = 0 or when the cofactor left after trial
/// division exceeds limit^2 (2^60 works with any tables).
Factorization factor(u64 n, PrimeTables const& tables);

/// p-adic valuation of n > 0.
inline unsigned valuation(u64 n, u64 p) noexcept {
    unsigned v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

u64 mul_checked(u64 a, u64 b);
u64 pow_checked(u64 base, unsigned exponent);
u64 lcm_checked(u64 a, u64 b);

/// lambda(p^a): p^(a-1)(p-1) for odd p or p = 2 with a <= 2; 2^(a-2) for
/// p = 2, a >= 3. Throws domain_error if p is not prime or a == 0.
u64 lambda_prime_power(u64 p, unsigned a);

u64 carmichael_lambda(Factorization const& f);
u64 carmichael_lambda(u64 n, PrimeTables const& tables);
u64 euler_phi(Factorization const& f);
u64 euler_phi(u64 n, PrimeTables const& tables);

std::vector<u64> divisors(Factorization const& f);
unsigned omega(Factorization const& f) noexcept;
int mobius(Factorization const& f) noexcept;
/// Ordered k-part factorization count: product over exponents e of C(e+k-1, k-1).
u64 tau_k(Factorization const& f, unsigned k);

/// Composite n >= 2 with lambda(n) | n - 1.
bool is_carmichael_number(u64 n, PrimeTables const& tables);

} // namespace vlambda
