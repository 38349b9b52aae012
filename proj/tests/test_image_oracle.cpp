#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "vlambda/arith.hpp"
#include "vlambda/errors.hpp"
#include "vlambda/image_oracle.hpp"

using namespace vlambda;

namespace {

PrimeTables const& tables() {
    static PrimeTables t(200'000);
    return t;
}

} // namespace

TEST_CASE("max lambda divisor examples") {
    auto p = max_lambda_divisor(14, tables());
    CHECK(p.L == 2);
    CHECK(p.two_part == 2);
    REQUIRE(p.odd_entries.size() == 1);
    CHECK(p.odd_entries[0].prime == 3);
    CHECK_FALSE(is_lambda_value(14, tables()));

    auto p8 = max_lambda_divisor(8, tables());
    CHECK(p8.L == 8);
    CHECK(p8.two_part == 8);
    CHECK(p8.two_exponent == 5);
    CHECK(is_lambda_value(8, tables()));

    CHECK(max_lambda_divisor(1, tables()).L == 1);
    CHECK(is_lambda_value(1, tables()));
    CHECK(is_lambda_value(10, tables()));
}

TEST_CASE("max witness examples") {
    CHECK(max_witness(1, tables()).value() == 2);
    CHECK(max_witness(2, tables()).value() == 24);
    CHECK(max_witness(10, tables()) == Factorization({{2, 3}, {3, 1}, {11, 1}}));
    CHECK(carmichael_lambda(max_witness(10, tables())) == 10);
}

TEST_CASE("L(n) matches the definition") {
    for (u64 n = 1; n <= 6000; ++n) {
        auto p = max_lambda_divisor(n, tables());
        REQUIRE(p.L == oracle::max_lambda_divisor(n));
        REQUIRE(n % p.L == 0);
        std::vector<u64> odd;
        for (u64 d = 2; d <= n; d += 2)
            if (n % d == 0 && oracle::is_prime(d + 1))
                odd.push_back(d + 1);
        REQUIRE(p.odd_entries.size() == odd.size());
        for (std::size_t i = 0; i < odd.size(); ++i)
            REQUIRE(p.odd_entries[i].prime == odd[i]);
    }
}

TEST_CASE("odd entries carry p^(v_p(n)) (p - 1)") {
    for (u64 n : {2ULL, 6ULL, 12ULL, 18ULL, 36ULL, 100ULL, 420ULL, 2520ULL, 5040ULL}) {
        auto p = max_lambda_divisor(n, tables());
        for (auto const& e : p.odd_entries) {
            unsigned v = valuation(n, e.prime);
            CHECK(e.max_exponent == v + 1);
            CHECK(e.contribution == oracle::ipow(e.prime, v) * (e.prime - 1));
            CHECK(n % e.contribution == 0);
        }
    }
}

TEST_CASE("odd numbers above 1 are never values") {
    for (u64 n = 3; n <= 20'001; n += 2)
        REQUIRE_FALSE(is_lambda_value(n, tables()));
}

TEST_CASE("every lambda(m) is a value") {
    for (u64 m = 1; m <= 100'000; ++m)
        REQUIRE(is_lambda_value(carmichael_lambda(m, tables()), tables()));
}

TEST_CASE("maximal witness certifies every value") {
    for (u64 n = 1; n <= 20'000; ++n) {
        bool member = is_lambda_value(n, tables());
        auto w = max_witness(n, tables());
        REQUIRE((carmichael_lambda(w) == n) == member);
    }
}

TEST_CASE("brute force image") {
    CHECK(brute_force_image(10, 10'000, tables()) == std::vector<u64>{1, 2, 4, 6, 8, 10});
    CHECK(brute_force_image(1, 2, tables()) == std::vector<u64>{1});
    auto img = brute_force_image(14, 10'000, tables());
    CHECK(std::find(img.begin(), img.end(), 14) == img.end());
    CHECK_THROWS(brute_force_image(10, 300'000, tables()));
}

TEST_CASE("brute force image is sandwiched by the oracle") {
    u64 const x = 2000, m_max = 200'000;
    auto img = brute_force_image(x, m_max, tables());
    for (u64 v : img)
        REQUIRE(is_lambda_value(v, tables()));
    for (u64 n = 1; n <= x; ++n) {
        if (!is_lambda_value(n, tables()))
            continue;
        auto w = max_witness(n, tables()).try_value();
        if (w && *w <= m_max)
            REQUIRE(std::binary_search(img.begin(), img.end(), n));
    }
    // Independent group-exponent enumeration agrees on a small range.
    std::vector<u64> direct;
    for (u64 m = 1; m <= 3000; ++m) {
        u64 v = oracle::lambda(m);
        if (v <= 30)
            direct.push_back(v);
    }
    std::sort(direct.begin(), direct.end());
    direct.erase(std::unique(direct.begin(), direct.end()), direct.end());
    CHECK(brute_force_image(30, 3000, tables()) == direct);
}

TEST_CASE("tables too small") {
    PrimeTables t(100);
    CHECK_THROWS_AS(max_lambda_divisor(20'000, t), range_error);
    CHECK_NOTHROW(max_lambda_divisor(9000, t));
}
