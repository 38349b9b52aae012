#include "vlambda/image_oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "vlambda/errors.hpp"

namespace vlambda {

MaxPreimageProfile max_lambda_divisor(u64 n, PrimeTables const& tables) {
    if (n == 0)
        throw range_error("max_lambda_divisor needs n >= 1");
    if (u128{n} + 1 > u128{tables.limit()} * tables.limit())
        throw range_error("tables up to " + std::to_string(tables.limit()) +
                          " cannot certify primes up to " + std::to_string(n) + "+1");

    MaxPreimageProfile prof;
    prof.n = n;
    if (n % 2 == 0) {
        unsigned v = static_cast<unsigned>(std::countr_zero(n));
        prof.two_part = u64{1} << v;
        prof.two_exponent = v + 2;
    }
    prof.L = prof.two_part;

    Factorization f = factor(n, tables);
    for (u64 d : divisors(f)) {
        // d + 1 odd forces d even.
        if (d % 2 != 0)
            continue;
        u64 p = d + 1;
        if (!is_prime(p, tables))
            continue;
        u64 contribution = d;
        unsigned v = 0;
        for (u64 rest = n; rest % p == 0; rest /= p) {
            contribution *= p;
            ++v;
        }
        prof.odd_entries.push_back({p, v + 1, contribution});
        prof.L = std::lcm(prof.L, contribution);
    }
    return prof;
}

bool is_lambda_value(u64 n, PrimeTables const& tables) {
    return max_lambda_divisor(n, tables).L == n;
}

Factorization max_witness(MaxPreimageProfile const& profile) {
    std::vector<PrimePower> pp;
    pp.push_back({2, profile.two_exponent});
    for (auto const& e : profile.odd_entries)
        pp.push_back({e.prime, e.max_exponent});
    return Factorization(std::move(pp));
}

Factorization max_witness(u64 n, PrimeTables const& tables) {
    return max_witness(max_lambda_divisor(n, tables));
}

std::vector<u64> brute_force_image(u64 x_max, u64 m_max, PrimeTables const& tables) {
    if (m_max > tables.limit())
        throw range_error("brute_force_image needs tables covering m_max");
    std::vector<char> seen(x_max + 1, 0);
    for (u64 m = 1; m <= m_max; ++m) {
        u64 l = carmichael_lambda(m, tables);
        if (l <= x_max)
            seen[l] = 1;
    }
    std::vector<u64> out;
    for (u64 v = 1; v <= x_max; ++v)
        if (seen[v])
            out.push_back(v);
    return out;
}

} // namespace vlambda
