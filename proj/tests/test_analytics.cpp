#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "vlambda/analytics.hpp"
#include "vlambda/errors.hpp"

using namespace vlambda;

TEST_CASE("exponent constants") {
    long double const l2 = std::log(2.0L);
    CHECK(eta_constant() == doctest::Approx(static_cast<double>(1.0L - (1.0L + std::log(l2)) / l2)).epsilon(1e-14));
    CHECK(std::fabs(eta_constant() - 0.08607) < 5e-6);
    CHECK(alpha_constant() == doctest::Approx(static_cast<double>(1.0L - std::exp(1.0L) * l2 / 2.0L)).epsilon(1e-14));
    CHECK(std::fabs(alpha_constant() - 0.0579153073) < 1e-10);
    CHECK(lp_lower_exponent == 0.359052);

    auto r = constants(12);
    CHECK(r.eta == eta_constant());
    CHECK(r.alpha == alpha_constant());
    CHECK(r.beta.size() == 11);
    CHECK(r.beta.front().k == 2);
}

TEST_CASE("beta_k") {
    CHECK(std::fabs(beta_k(2) - 0.2701690101) < 1e-9);
    CHECK(std::fabs(beta_k(3) - 0.1256777367) < 1e-9);
    CHECK(beta_k(2) - eta_constant() > 0);
    CHECK(std::fabs(beta_k(30) - eta_constant()) < 1e-4);
    auto rows = beta_convergence(60);
    for (auto const& row : rows) {
        CHECK(std::isfinite(row.beta));
        CHECK(row.gap == doctest::Approx(row.beta - eta_constant()));
    }
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::fabs(rows[i].gap) <= std::fabs(rows[i - 1].gap) + 1e-12);
    CHECK_THROWS_AS(beta_k(1), domain_error);
    CHECK_THROWS_AS(beta_convergence(1), domain_error);
}

TEST_CASE("f profile") {
    for (unsigned k = 2; k <= 12; ++k) {
        auto p = f_profile(k, 101);
        CHECK(std::fabs(p.f0) <= 1e-9);
        CHECK(std::fabs(p.fk) <= 1e-9);
        CHECK(p.interior_max < 0);
        CHECK(p.interior_min <= p.interior_max);
        CHECK(p.second_derivative_min > 0);
        CHECK(p.second_difference_min > 0);
        for (double t : {0.3, 1.0, k / 2.0, k - 0.4}) {
            double h = 1e-3;
            double numeric = (f_value(k, t + h) - 2 * f_value(k, t) + f_value(k, t - h)) / (h * h);
            CHECK(f_second_derivative(k, t) == doctest::Approx(numeric).epsilon(1e-4));
        }
    }
    CHECK_THROWS_AS(f_profile(1, 101), domain_error);
}

TEST_CASE("elementary symmetric sums against direct enumeration") {
    std::vector<u64> primes;
    for (u64 p = 2; p <= 1000; ++p)
        if (oracle::is_prime(p))
            primes.push_back(p);
    auto sums = prime_power_sums(1000, 3);
    long double e1 = 0, e2 = 0, e3 = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        long double a = 1.0L / primes[i];
        e1 += a;
        for (std::size_t j = i + 1; j < primes.size(); ++j) {
            long double ab = a / primes[j];
            e2 += ab;
            for (std::size_t l = j + 1; l < primes.size(); ++l)
                e3 += ab / primes[l];
        }
    }
    CHECK(std::fabs(elementary_symmetric(sums, 1) / e1 - 1) < 1e-9);
    CHECK(std::fabs(elementary_symmetric(sums, 2) / e2 - 1) < 1e-9);
    CHECK(std::fabs(elementary_symmetric(sums, 3) / e3 - 1) < 1e-9);
    CHECK_THROWS_AS(elementary_symmetric(sums, 4), domain_error);
}

TEST_CASE("symmetric prime sum ratio") {
    for (unsigned h = 1; h <= 5; ++h) {
        auto r = lemma1_ratio(1'000'000, h);
        CHECK(r.ratio >= 0.05L);
        CHECK(r.ratio <= 3.0L);
        long double llx = std::log(std::log(1e6L));
        CHECK(r.reference == doctest::Approx(static_cast<double>(std::pow(llx, h) / std::tgamma(h + 1.0L))));
    }
    CHECK_THROWS_AS(lemma1_ratio(1'000'000, 0), domain_error);
    CHECK_THROWS_AS(lemma1_ratio(1'000'000, 6), domain_error);
    CHECK_THROWS_AS(lemma1_ratio(1'000'000'000, 1), range_error);
}

TEST_CASE("phi image count") {
    CHECK(phi_image_count(10) == 6);
    CHECK(phi_image_count(1) == 1);
    CHECK(phi_image_count(0) == 0);

    u64 const x = 300;
    std::set<u64> values;
    for (u64 m = 1; m <= 2 * x * x; ++m) {
        u64 v = oracle::phi(m);
        if (v <= x)
            values.insert(v);
    }
    CHECK(phi_image_count(x) == values.size());

    u64 const bound = phi_search_bound(x);
    for (u64 m = bound + 1; m <= bound + 20'000; ++m)
        REQUIRE(oracle::phi(m) > x);

    u64 primes = 0;
    for (u64 p = 2; p <= 1001; ++p)
        primes += oracle::is_prime(p);
    CHECK(phi_image_count(1000) >= primes);
    CHECK_THROWS_AS(phi_image_count(10'000'001), range_error);
}

TEST_CASE("multiplication table") {
    CHECK(mult_table_count(4) == 9);
    CHECK(mult_table_count(1) == 1);
    for (u64 n = 1; n <= 120; ++n) {
        std::set<u64> seen;
        for (u64 i = 1; i <= n; ++i)
            for (u64 j = 1; j <= n; ++j)
                seen.insert(i * j);
        REQUIRE(mult_table_count(n) == seen.size());
    }
    CHECK(std::isnan(mult_table_exponent(4, 9)));
    CHECK(std::isfinite(mult_table_exponent(1024, mult_table_count(1024))));
    CHECK_THROWS_AS(mult_table_count(0), range_error);
}

TEST_CASE("omega distribution") {
    PrimeTables t(1000);
    auto d = omega_distribution(10, t);
    CHECK(d.image_size == 6);
    CHECK(d.mean_omega_image == doctest::Approx(7.0 / 6.0));
    CHECK(d.mean_omega_all == doctest::Approx(1.1));
    CHECK_THROWS_AS(omega_distribution(2000, t), range_error);
}

TEST_CASE("exponent fit") {
    CountSeries s;
    s.records.push_back({.x = 2, .v_lambda = 1});
    s.records.push_back({.x = 1000, .v_lambda = 328});
    auto rows = exponent_fit(s);
    REQUIRE(rows.size() == 2);
    CHECK(std::isnan(rows[0].eta_hat));
    CHECK(rows[1].eta_hat == doctest::Approx(std::log(1000.0 / 328.0) / std::log(std::log(1000.0))));
}
