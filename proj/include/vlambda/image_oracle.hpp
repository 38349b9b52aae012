#pragma once

/// @file image_oracle.hpp
/// @brief Membership in the image of Carmichael's lambda function.
///
/// For n >= 1 let L(n) be the lcm of every prime-power value lambda(p^a)
/// that divides n. Such values are
///
///   * powers of two: lambda(2^a) | n iff lambda(2^a) | 2^v, v = v_2(n).
///     The largest is 2^v, realized by 2^(v+2) when n is even, and 1 =
///     lambda(2) when n is odd;
///   * p^(a-1)(p-1) for odd p: it divides n iff (p-1) | n and
///     a - 1 <= v_p(n). The largest is p^(v_p(n))(p-1), realized by
///     a = v_p(n) + 1.
///
/// Every such value divides the maximal one for its prime, so
/// L(n) = lcm(2^v_2(n), p^(v_p(n))(p-1) : p odd prime, (p-1) | n), and
/// L(n) | n always.
///
/// Claim: n = lambda(m) for some m  <=>  L(n) = n.
///
/// (=>) lambda(m) = lcm over p^a || m of lambda(p^a). Each of these divides
/// lambda(m) = n, hence divides the maximal value for its prime, hence
/// divides L(n). So n | L(n), and with L(n) | n we get L(n) = n.
///
/// (<=) Let m* = 2^(v_2(n)+2) (n even) or 2 (n odd), times p^(v_p(n)+1)
/// for every odd prime p with (p-1) | n. The prime powers of m* are
/// exactly the maximal ones above, so lambda(m*) = L(n) = n.
///
/// The check is local to the divisors of n: candidates p are d + 1 for
/// d | n, so no scan over primes up to n is needed.

#include <vector>

#include "vlambda/arith.hpp"

namespace vlambda {

struct OddEntry {
    u64 prime = 0;
    unsigned max_exponent = 0; ///< v_p(n) + 1
    u64 contribution = 0;      ///< p^(v_p(n)) (p - 1)

    friend bool operator==(OddEntry const&, OddEntry const&) = default;
};

struct MaxPreimageProfile {
    u64 n = 0;
    u64 two_part = 1;          ///< 2^(v_2(n)) for even n, else 1
    unsigned two_exponent = 1; ///< v_2(n) + 2 for even n, else 1
    std::vector<OddEntry> odd_entries; ///< ascending by prime
    u64 L = 1;
};

/// Requires n >= 1 and n + 1 <= limit^2; throws range_error otherwise.
MaxPreimageProfile max_lambda_divisor(u64 n, PrimeTables const& tables);

bool is_lambda_value(u64 n, PrimeTables const& tables);

/// The modulus m* from the header comment. lambda(m*) = L(n) always, and
/// equals n exactly when n is a lambda value.
Factorization max_witness(u64 n, PrimeTables const& tables);
Factorization max_witness(MaxPreimageProfile const& profile);

/// { lambda(m) : 1 <= m <= m_max } restricted to [1, x_max], ascending.
///
/// Independent of the L(n) criterion. It is a subset of the true image on
/// [1, x_max]; equality holds once m_max exceeds every member's witness.
/// Requires m_max <= tables.limit().
std::vector<u64> brute_force_image(u64 x_max, u64 m_max, PrimeTables const& tables);

} // namespace vlambda
