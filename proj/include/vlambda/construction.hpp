#pragma once

/// @file construction.hpp
/// @brief Multi-prime representations n = lambda(q_0 ... q_{k-1}) and the
/// dual-factorization combinatorics used to bound their second moment.
///
/// A representation of squarefree n splits its prime factors into k rough
/// parts a_0..a_{k-1} (each > 1) and 2^k - 1 smooth parts b_1..b_{2^k-1},
///
///   n = a_0 ... a_{k-1} * b_1 ... b_{2^k-1},
///
/// such that q_i = a_i B_i + 1 is prime for every i, where B_i is the
/// product of the b_j whose index j has bit i set. Then
/// lambda(q_0 ... q_{k-1}) = lcm(a_i B_i) = n.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vlambda/arith.hpp"

namespace vlambda {

inline constexpr unsigned max_search_k = 6;
inline constexpr unsigned max_search_omega = 24;

/// Which structural conditions a representation search enforces. Each a_i
/// must be nonempty and each q_i prime in every mode.
struct Relaxations {
    bool enforce_smooth_rough_split = true; ///< P+(b_j) <= y < P-(a_i)
    bool enforce_omega_l = true;            ///< omega(b_j) = l for every j
    bool enforce_even_last = true;          ///< 2 | b_{2^k-1}
    bool enforce_range = true;              ///< 2^(-2k) x < n <= x

    static Relaxations strict() noexcept { return {}; }
    static Relaxations relaxed() noexcept { return {false, false, true, false}; }
};

struct RepresentationParams {
    double x = 0;
    double log_x = 0;
    unsigned k = 2;
    double y = 0;
    double log_y = 0;
    long long l = 0;
    bool degenerate = true; ///< y < 3 or l < 1
    Relaxations relaxations;
};

/// y = exp(log x / (200 k log log x)),
/// l = floor(k log log y / ((2^k - 1) log(2^k - 1))). Strict relaxations.
RepresentationParams params_for(double x, unsigned k);
/// Same, from log x, for scales beyond double range.
RepresentationParams params_for_log(double log_x, unsigned k);

/// Coefficient k / ((2^k - 1) log(2^k - 1)) of log log y in l.
double l_coefficient(unsigned k);

/// S_i = { j in [1, 2^k - 1] : floor(j / 2^i) odd } for i < k; 2 <= k <= 16.
std::vector<std::vector<unsigned>> index_sets(unsigned k);

struct Representation {
    u64 n = 0;
    unsigned k = 0;
    std::vector<u64> a; ///< a_0 .. a_{k-1}
    std::vector<u64> b; ///< b[j - 1] = b_j, j = 1 .. 2^k - 1
    std::vector<u64> B; ///< B_0 .. B_{k-1}
    std::vector<u64> q; ///< q_i = a_i B_i + 1
};

struct RepresentationSearch {
    u64 count = 0; ///< r(n), exact regardless of max_results
    std::vector<Representation> representations;
};

/// r(n) and up to max_results representations. n must be squarefree
/// (domain_error) with omega(n) <= 24 (complexity_error); k in [2, 6].
/// Primality of q_i uses `tables` (needs n + 1 <= limit^2).
RepresentationSearch find_representations(u64 n, RepresentationParams const& params, std::size_t max_results,
                                          PrimeTables const& tables);

/// Same search over an explicit list of the distinct primes of n, in the
/// given order. The count does not depend on the order.
RepresentationSearch find_representations(std::span<const u64> primes, RepresentationParams const& params,
                                          std::size_t max_results, PrimeTables const& tables);

/// All q_i prime and pairwise distinct, and lambda(q_0 ... q_{k-1}) == rep.n.
bool verify_representation(Representation const& rep, PrimeTables const& tables);

struct S1S2Report {
    u64 s1 = 0;             ///< sum of mu^2(n) r(n)
    u64 s2 = 0;             ///< sum of mu^2(n) r(n)^2
    u64 positive_count = 0; ///< squarefree n with r(n) > 0
    double cauchy_bound = 0; ///< s1^2 / s2, 0 when s2 == 0
    /// positive_count * s2 >= s1^2 in exact integer arithmetic.
    bool cauchy_holds = false;
};

/// Sums over n in (x / 2^(2k), x]. Requires x <= 10^5.
S1S2Report empirical_s1_s2(u64 x, unsigned k, RepresentationParams const& params, PrimeTables const& tables,
                           unsigned workers = 1);

/// B_v for v in [0, 2^m): the product of b_j with j mod 2^m == v.
/// b_list holds b_1 .. b_{2^k-1}.
std::vector<u64> b_v_partition(unsigned k, unsigned m, std::span<const u64> b_list);

/// Two factorizations b = prod b_j = prod b'_j of the same squarefree b.
/// Prime t of b goes to b_{assignments[t].first} and b'_{assignments[t].second}.
struct DualFactorization {
    unsigned k = 0;
    unsigned m = 0;
    std::vector<u64> primes;
    std::vector<std::pair<unsigned, unsigned>> assignments;
    std::vector<u64> b, b_dual;             ///< index j - 1
    std::vector<u64> B_v, B_v_dual;         ///< index v
    std::vector<u64> B_low, B_low_dual;     ///< B_i for i < m

    u64 product() const;
    bool low_indices_match() const noexcept { return B_low == B_low_dual; }
    bool classes_match() const noexcept { return B_v == B_v_dual; }
};

DualFactorization make_dual_factorization(unsigned k, unsigned m, std::span<const u64> primes,
                                          std::span<const std::pair<unsigned, unsigned>> assignments);

/// ((2^m - 1) 2^(2(k-m)) + (2^(k-m) - 1)^2)^omega_b; 0 <= m <= k <= 5.
u64 dual_count_formula(unsigned k, unsigned m, unsigned omega_b);
/// Per prime, counts index pairs (j, j') whose low m bits agree and
/// multiplies over the omega_b primes. omega_b <= 8.
u64 dual_count_bruteforce(unsigned k, unsigned m, unsigned omega_b);

/// Exhaustively enumerates every factorization of one squarefree b into
/// 2^k - 1 ordered parts and checks that factorizations agreeing on
/// B_0..B_{m-1} agree on every B_v. 2 <= k <= 4, 0 <= m <= k, omega <= 6.
bool b_v_identity_exhaustive(unsigned k, unsigned m, std::span<const u64> primes_of_b);

/// Runs the exhaustive check on `trials` random squarefree b with
/// 1 <= omega(b) <= 6 drawn from a fixed prime pool.
bool b_v_identity_check(unsigned k, unsigned m, unsigned trials, std::uint64_t seed = 1);

} // namespace vlambda
