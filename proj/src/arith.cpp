#include "vlambda/arith.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "vlambda/errors.hpp"

namespace vlambda {

Factorization::Factorization(std::vector<PrimePower> factors) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].exponent == 0 || factors_[i].prime < 2)
            throw domain_error("factorization entries need prime >= 2 and exponent >= 1");
        if (i > 0 && factors_[i - 1].prime >= factors_[i].prime)
            throw domain_error("factorization primes must be strictly ascending");
    }
}

std::optional<u64> Factorization::try_value() const noexcept {
    u128 acc = 1;
    constexpr u128 max = std::numeric_limits<u64>::max();
    for (auto const& [p, e] : factors_) {
        for (unsigned i = 0; i < e; ++i) {
            acc *= p;
            if (acc > max)
                return std::nullopt;
        }
    }
    return static_cast<u64>(acc);
}

u64 Factorization::value() const {
    auto v = try_value();
    if (!v)
        throw overflow_error("factorization value exceeds 64 bits: " + to_string());
    return *v;
}

std::string Factorization::to_string() const {
    if (factors_.empty())
        return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i)
            os << '*';
        os << factors_[i].prime;
        if (factors_[i].exponent > 1)
            os << '^' << factors_[i].exponent;
    }
    return os.str();
}

PrimeTables::PrimeTables(u64 limit, u64 ceiling) : limit_(limit) {
    if (limit < 2)
        throw config_error("prime table limit must be at least 2");
    if (limit > ceiling || limit >= (u64{1} << 32))
        throw config_error("prime table limit " + std::to_string(limit) + " exceeds ceiling " +
                           std::to_string(ceiling));

    spf_.assign(limit + 1, 0);
    bits_.assign(limit / 64 + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
        if (spf_[i] != 0)
            continue;
        spf_[i] = static_cast<std::uint32_t>(i);
        primes_.push_back(static_cast<std::uint32_t>(i));
        bits_[i >> 6] |= u64{1} << (i & 63);
        for (u64 j = i * i; j <= limit; j += i)
            if (spf_[j] == 0)
                spf_[j] = static_cast<std::uint32_t>(i);
    }
}

std::size_t PrimeTables::prime_count(u64 x) const {
    if (x > limit_)
        throw range_error("prime_count argument exceeds table limit");
    return static_cast<std::size_t>(
        std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

PrimeTables build_tables(u64 limit, u64 ceiling) { return PrimeTables(limit, ceiling); }

namespace {

bool within_square(u64 n, u64 limit) { return u128{n} <= u128{limit} * limit; }

} // namespace

bool is_prime(u64 n, PrimeTables const& tables) {
    if (n <= tables.limit())
        return n >= 2 && tables.is_prime(n);
    for (std::uint32_t p : tables.primes()) {
        if (u64{p} * p > n)
            return true;
        if (n % p == 0)
            return false;
    }
    if (!within_square(n, tables.limit()))
        throw range_error("primality of " + std::to_string(n) + " needs tables beyond " +
                          std::to_string(tables.limit()));
    return true;
}

Factorization factor(u64 n, PrimeTables const& tables) {
    if (n == 0)
        throw range_error("cannot factor 0");
    u64 const original = n;

    std::vector<PrimePower> out;
    auto push = [&out](u64 p) {
        if (!out.empty() && out.back().prime == p)
            ++out.back().exponent;
        else
            out.push_back({p, 1});
    };

    // Trial division until the remainder drops into the table.
    bool residual_prime = false;
    for (std::uint32_t p : tables.primes()) {
        if (n <= tables.limit())
            break;
        if (u64{p} * p > n) {
            residual_prime = true;
            break;
        }
        while (n % p == 0) {
            push(p);
            n /= p;
        }
    }
    if (n > tables.limit()) {
        if (!residual_prime && !within_square(n, tables.limit()))
            throw range_error("cannot factor " + std::to_string(original) + " with tables up to " +
                              std::to_string(tables.limit()));
        push(n); // residual prime
        n = 1;
    }
    while (n > 1) {
        u64 p = tables.smallest_prime_factor(n);
        push(p);
        n /= p;
    }
    return Factorization(std::move(out));
}

u64 mul_checked(u64 a, u64 b) {
    u128 r = u128{a} * b;
    if (r > std::numeric_limits<u64>::max())
        throw overflow_error("64-bit multiplication overflow");
    return static_cast<u64>(r);
}

u64 pow_checked(u64 base, unsigned exponent) {
    u64 r = 1;
    for (unsigned i = 0; i < exponent; ++i)
        r = mul_checked(r, base);
    return r;
}

u64 lcm_checked(u64 a, u64 b) {
    if (a == 0 || b == 0)
        return 0;
    return mul_checked(a / std::gcd(a, b), b);
}

namespace {

bool is_prime_trial(u64 p) {
    if (p < 2)
        return false;
    if (p % 2 == 0)
        return p == 2;
    for (u64 d = 3; d <= p / d; d += 2)
        if (p % d == 0)
            return false;
    return true;
}

u64 lambda_pp_unchecked(u64 p, unsigned a) {
    if (p == 2 && a >= 3)
        return u64{1} << (a - 2);
    return mul_checked(pow_checked(p, a - 1), p - 1);
}

} // namespace

u64 lambda_prime_power(u64 p, unsigned a) {
    if (a == 0)
        throw domain_error("lambda_prime_power needs exponent >= 1");
    if (!is_prime_trial(p))
        throw domain_error(std::to_string(p) + " is not prime");
    return lambda_pp_unchecked(p, a);
}

u64 carmichael_lambda(Factorization const& f) {
    u64 r = 1;
    for (auto const& [p, a] : f.factors())
        r = lcm_checked(r, lambda_pp_unchecked(p, a));
    return r;
}

u64 carmichael_lambda(u64 n, PrimeTables const& tables) {
    return carmichael_lambda(factor(n, tables));
}

u64 euler_phi(Factorization const& f) {
    u64 r = 1;
    for (auto const& [p, a] : f.factors())
        r = mul_checked(r, mul_checked(pow_checked(p, a - 1), p - 1));
    return r;
}

u64 euler_phi(u64 n, PrimeTables const& tables) { return euler_phi(factor(n, tables)); }

std::vector<u64> divisors(Factorization const& f) {
    std::vector<u64> out{1};
    for (auto const& [p, a] : f.factors()) {
        std::size_t base = out.size();
        u64 pk = 1;
        for (unsigned i = 0; i < a; ++i) {
            pk = mul_checked(pk, p);
            for (std::size_t j = 0; j < base; ++j)
                out.push_back(mul_checked(out[j], pk));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

unsigned omega(Factorization const& f) noexcept { return static_cast<unsigned>(f.size()); }

int mobius(Factorization const& f) noexcept {
    for (auto const& pp : f.factors())
        if (pp.exponent > 1)
            return 0;
    return (f.size() % 2 == 0) ? 1 : -1;
}

namespace {

// C(n, r) with exact intermediate division.
u64 binomial_checked(u64 n, u64 r) {
    r = std::min(r, n - r);
    u128 acc = 1;
    for (u64 i = 1; i <= r; ++i) {
        acc = acc * (n - r + i) / i;
        if (acc > std::numeric_limits<u64>::max())
            throw overflow_error("binomial coefficient overflow");
    }
    return static_cast<u64>(acc);
}

} // namespace

u64 tau_k(Factorization const& f, unsigned k) {
    if (k == 0)
        throw domain_error("tau_k needs k >= 1");
    u64 r = 1;
    for (auto const& pp : f.factors())
        r = mul_checked(r, binomial_checked(u64{pp.exponent} + k - 1, k - 1));
    return r;
}

bool is_carmichael_number(u64 n, PrimeTables const& tables) {
    if (n < 2)
        throw domain_error("is_carmichael_number needs n >= 2");
    Factorization f = factor(n, tables);
    if (f.size() == 1 && f.factors()[0].exponent == 1)
        return false;
    return (n - 1) % carmichael_lambda(f) == 0;
}

} // namespace vlambda
